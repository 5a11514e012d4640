#include "stackr/io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace stackr::io {

using nlohmann::json;

static json arrangement_to_json(const Arrangement& a) {
    json arr = json::array();
    for (int s = 1; s <= a.num_stacks(); ++s) arr.push_back(a.stack(s));
    return arr;
}

static Arrangement arrangement_from_json(const json& j, const char* field,
                                         int num_stacks) {
    if (!j.is_array())
        throw std::invalid_argument(std::string(field) + ": expected an array of stacks");
    if (static_cast<int>(j.size()) != num_stacks)
        throw std::invalid_argument(std::string(field) + ": expected exactly " +
                                    std::to_string(num_stacks) + " stacks, got " +
                                    std::to_string(j.size()));
    std::vector<std::vector<ObjectId>> stacks;
    stacks.reserve(j.size());
    for (const auto& st : j) {
        if (!st.is_array())
            throw std::invalid_argument(std::string(field) + ": each stack must be an array");
        std::vector<ObjectId> ids;
        for (const auto& v : st) {
            if (!v.is_number_integer())
                throw std::invalid_argument(std::string(field) + ": object ids must be integers");
            ids.push_back(v.get<int>());
        }
        stacks.push_back(std::move(ids));
    }
    return Arrangement(std::move(stacks));
}

static const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field: ") + field);
    return *it;
}

static int require_int(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string(field) + ": expected an integer");
    return v.get<int>();
}

std::string instance_to_json(const Instance& inst) {
    json j;
    j["version"] = 1;
    j["num_stacks"] = inst.geometry.num_stacks;
    j["depth"] = inst.geometry.depth;
    j["n"] = inst.n;
    j["kind"] = kind_name(inst.kind);
    j["start"] = arrangement_to_json(inst.start);
    j["goal"] = arrangement_to_json(inst.goal);
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance: invalid JSON: ") + e.what());
    }
    if (require_int(j, "version") != 1)
        throw std::invalid_argument("version: only version 1 is supported");
    Instance inst;
    inst.geometry.num_stacks = require_int(j, "num_stacks");
    inst.geometry.depth = require_int(j, "depth");
    inst.n = require_int(j, "n");
    const json& kind = require(j, "kind");
    if (kind == "labeled")
        inst.kind = Kind::Labeled;
    else if (kind == "column")
        inst.kind = Kind::ColumnLabeled;
    else
        throw std::invalid_argument("kind: expected \"labeled\" or \"column\"");
    inst.start = arrangement_from_json(require(j, "start"), "start",
                                       inst.geometry.num_stacks);
    inst.goal = arrangement_from_json(require(j, "goal"), "goal",
                                      inst.geometry.num_stacks);
    validate_instance(inst);
    return inst;
}

std::string solution_to_json(const Solution& sol) {
    json j;
    j["cost"] = sol.cost;
    json acts = json::array();
    for (const Action& a : sol.actions)
        acts.push_back(json::array({a.from_stack, a.to_stack}));
    j["actions"] = acts;
    return j.dump() + "\n";
}

Solution solution_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("solution: invalid JSON: ") + e.what());
    }
    Solution sol;
    sol.cost = require_int(j, "cost");
    const json& acts = require(j, "actions");
    if (!acts.is_array())
        throw std::invalid_argument("actions: expected an array of [from, to] pairs");
    for (const auto& a : acts) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
            !a[1].is_number_integer())
            throw std::invalid_argument("actions: each entry must be [from, to]");
        sol.actions.push_back(Action{a[0].get<int>(), a[1].get<int>()});
    }
    if (sol.cost != static_cast<int>(sol.actions.size()))
        throw std::invalid_argument("cost: does not match the number of actions");
    return sol;
}

std::string stats_to_json(const SolverStats& stats) {
    json j;
    j["expansions"] = stats.expansions;
    j["elapsed_ms"] = stats.elapsed_ms;
    j["peak_open"] = stats.peak_open;
    j["peak_closed"] = stats.peak_closed;
    return j.dump() + "\n";
}

static std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

static void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

Instance load_instance(const std::string& path) {
    return instance_from_json(read_file(path));
}

void save_instance(const Instance& inst, const std::string& path) {
    write_file(path, instance_to_json(inst));
}

Solution load_solution(const std::string& path) {
    return solution_from_json(read_file(path));
}

void save_solution(const Solution& sol, const std::string& path) {
    write_file(path, solution_to_json(sol));
}

}  // namespace stackr::io
