#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stackr/bench.hpp"
#include "stackr/core.hpp"
#include "stackr/io.hpp"
#include "stackr/poly.hpp"
#include "stackr/search.hpp"

// Exit codes: 0 success, 1 solver timeout/failure, 2 usage error,
// 3 verification failure.

namespace {

using namespace stackr;

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailure = 3;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

struct GenArgs {
    int w = 0, d = 0, n = 0;
    std::uint64_t seed = 0;
    bool seeded = false;
    std::string kind = "labeled";
    std::string out_path;
    bool pretty = false;
};

int run_gen(const GenArgs& args) {
    bench::Setup setup;
    setup.w = args.w;
    setup.d = args.d;
    setup.n = args.n;
    std::uint64_t seed = args.seed;
    if (!args.seeded)
        seed = static_cast<std::uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count());
    Kind kind = args.kind == "column" ? Kind::ColumnLabeled : Kind::Labeled;
    Instance inst = bench::generate_instance(setup, seed, kind);
    io::save_instance(inst, args.out_path);
    std::cout << "seed: " << seed << "\n";
    if (args.pretty) {
        std::cout << "start:\n" << render(inst.start, inst.geometry);
        std::cout << "goal:\n" << render(inst.goal, inst.geometry);
    }
    return kExitOk;
}

struct SolveArgs {
    std::string in_path;
    std::string algo = "astar";
    std::string heuristic = "cbh";
    double weight = 1.0;
    long long timeout_ms = 5000;
    std::string out_path;
    std::string stats_path;
    bool pretty = false;
};

int run_solve(const SolveArgs& args) {
    Instance inst = io::load_instance(args.in_path);
    Solution sol;
    bool solved = false;
    if (args.algo == "polyd" || args.algo == "polylsr") {
        sol = args.algo == "polyd" ? poly::poly_d_solve(inst)
                                   : poly::poly_lsr_solve(inst);
        solved = true;
    } else {
        search::SearchConfig cfg;
        cfg.algorithm = search::algorithm_from_name(args.algo);
        cfg.heuristic = heuristics::heuristic_from_name(args.heuristic);
        cfg.weight = args.weight;
        cfg.timeout = std::chrono::milliseconds(args.timeout_ms);
        search::SolveOutcome out = search::solve(inst, cfg);
        sol = out.solution;
        sol.stats = out.stats;
        solved = out.status == search::SolveStatus::Solved;
        if (out.status == search::SolveStatus::Timeout)
            std::cerr << "timeout after " << out.stats.elapsed_ms << " ms\n";
        else if (out.status == search::SolveStatus::Unsolvable)
            std::cerr << "search space exhausted without reaching the goal\n";
    }
    std::cout << io::stats_to_json(sol.stats);
    if (!solved) return kExitSolverFailure;
    if (!args.out_path.empty()) io::save_solution(sol, args.out_path);
    if (args.pretty) {
        Arrangement cur = inst.start;
        for (const Action& a : sol.actions) cur = apply_action(a, cur, inst.geometry);
        std::cout << "cost: " << sol.cost << "\nfinal:\n" << render(cur, inst.geometry);
    }
    return kExitOk;
}

int run_verify(const std::string& in_path, const std::string& sol_path) {
    Instance inst = io::load_instance(in_path);
    Solution sol = io::load_solution(sol_path);
    VerifyReport rep = verify_solution(inst, sol);
    if (rep.ok) {
        std::cout << "ok cost=" << rep.cost << "\n";
        return kExitOk;
    }
    std::cout << "invalid at step " << rep.failed_step << ": " << rep.reason << "\n";
    return kExitVerifyFailure;
}

int run_bench(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config: " + config_path);
    nlohmann::json cfg = nlohmann::json::parse(in);
    if (!cfg.contains("seed"))
        throw std::invalid_argument(
            "config: a master \"seed\" is required for reproducibility");
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    const long long timeout_ms = cfg.value("timeout_ms", 5000LL);
    const int instance_count = cfg.value("instance_count", 100);

    std::vector<bench::Setup> setups;
    for (const auto& js : cfg.at("setups")) {
        bench::Setup s;
        s.w = js.at("w").get<int>();
        s.d = js.at("d").get<int>();
        s.n = js.at("n").get<int>();
        s.instance_count = js.value("instance_count", instance_count);
        s.seed = bench::mix_seed(seed, setups.size());
        setups.push_back(s);
    }
    std::vector<bench::AlgoSpec> specs;
    for (const auto& ja : cfg.at("algorithms")) {
        bench::AlgoSpec a;
        a.algo = ja.at("algo").get<std::string>();
        a.heuristic =
            heuristics::heuristic_from_name(ja.value("heuristic", "cbh"));
        a.weight = ja.value("weight", 1.0);
        specs.push_back(a);
    }

    bench::BenchReport report =
        bench::run_matrix(setups, specs, std::chrono::milliseconds(timeout_ms),
                          bench::default_threads());

    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "plots");
    write_text((fs::path(out_dir) / "instances.csv").string(),
               bench::instances_csv(report));
    write_text((fs::path(out_dir) / "aggregate.csv").string(),
               bench::aggregate_csv(report));
    write_text((fs::path(out_dir) / "aggregate.txt").string(),
               bench::aggregate_text(report));
    for (const auto& [name, body] : bench::plot_series(report))
        write_text((fs::path(out_dir) / "plots" / (name + ".dat")).string(), body);
    std::cout << bench::aggregate_text(report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stackr: stack rearrangement solvers and benchmarks"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a random instance");
    cmd_gen->add_option("--w", gen.w, "working stacks (buffer excluded)")->required();
    cmd_gen->add_option("--d", gen.d, "stack depth")->required();
    cmd_gen->add_option("--n", gen.n, "object count")->required();
    CLI::Option* seed_opt = cmd_gen->add_option("--seed", gen.seed, "64-bit seed");
    cmd_gen->add_option("--kind", gen.kind, "labeled|column")
        ->check(CLI::IsMember({"labeled", "column"}));
    cmd_gen->add_option("--out", gen.out_path, "instance file to write")->required();
    cmd_gen->add_flag("--pretty", gen.pretty, "render the arrangements");

    SolveArgs solve;
    CLI::App* cmd_solve = app.add_subcommand("solve", "solve an instance file");
    cmd_solve->add_option("--in", solve.in_path, "instance file")->required();
    cmd_solve->add_option("--algo", solve.algo,
                          "bfs|bibfs|astar|bhpa|polyd|polylsr");
    cmd_solve->add_option("--heuristic", solve.heuristic,
                          "dbh1|dbhn|cbh|cbh+dbh1|zero");
    cmd_solve->add_option("--weight", solve.weight, "heuristic weight >= 1");
    cmd_solve->add_option("--timeout-ms", solve.timeout_ms, "search timeout");
    cmd_solve->add_option("--out", solve.out_path, "solution file to write");
    cmd_solve->add_flag("--pretty", solve.pretty, "render the final state");

    std::string verify_in, verify_sol;
    CLI::App* cmd_verify = app.add_subcommand("verify", "replay a solution file");
    cmd_verify->add_option("--in", verify_in, "instance file")->required();
    cmd_verify->add_option("--solution", verify_sol, "solution file")->required();

    std::string bench_config, bench_out;
    CLI::App* cmd_bench = app.add_subcommand("bench", "run an experiment matrix");
    cmd_bench->add_option("--config", bench_config, "bench config JSON")->required();
    cmd_bench->add_option("--out-dir", bench_out, "output directory")->required();

    int bounds_w = 0, bounds_d = 0;
    CLI::App* cmd_bounds =
        app.add_subcommand("bounds", "print the counting lower bound");
    cmd_bounds->add_option("--w", bounds_w, "working stacks")->required();
    cmd_bounds->add_option("--d", bounds_d, "stack depth")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_gen->parsed()) {
            gen.seeded = seed_opt->count() > 0;
            return run_gen(gen);
        }
        if (cmd_solve->parsed()) return run_solve(solve);
        if (cmd_verify->parsed()) return run_verify(verify_in, verify_sol);
        if (cmd_bench->parsed()) return run_bench(bench_config, bench_out);
        if (cmd_bounds->parsed()) {
            std::cout << stackr::bench::counting_lower_bound(bounds_w, bounds_d)
                      << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitUsage;
}
