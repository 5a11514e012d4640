#include "stackr/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stackr {

void validate_geometry(const Geometry& g) {
    if (g.num_stacks < 3)
        throw std::invalid_argument("geometry: num_stacks must be >= 3, got " +
                                    std::to_string(g.num_stacks));
    if (g.depth < 1)
        throw std::invalid_argument("geometry: depth must be >= 1, got " +
                                    std::to_string(g.depth));
}

int Arrangement::object_count() const {
    int n = 0;
    for (const auto& s : stacks_) n += static_cast<int>(s.size());
    return n;
}

std::pair<int, int> Arrangement::find(ObjectId o) const {
    for (int s = 0; s < static_cast<int>(stacks_.size()); ++s) {
        for (int y = 0; y < static_cast<int>(stacks_[s].size()); ++y) {
            if (stacks_[s][y] == o) return {s + 1, y + 1};
        }
    }
    return {0, 0};
}

void validate_arrangement(const Arrangement& a, const Geometry& g, int n) {
    if (a.num_stacks() != g.num_stacks)
        throw std::invalid_argument(
            "arrangement: expected " + std::to_string(g.num_stacks) +
            " stacks, got " + std::to_string(a.num_stacks()));
    std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
    for (int s = 1; s <= g.num_stacks; ++s) {
        if (a.height(s) > g.depth)
            throw std::invalid_argument("arrangement: stack " + std::to_string(s) +
                                        " exceeds depth " + std::to_string(g.depth));
        for (ObjectId o : a.stack(s)) {
            if (o < 1 || o > n)
                throw std::invalid_argument("arrangement: object id " +
                                            std::to_string(o) + " outside [1, " +
                                            std::to_string(n) + "]");
            if (seen[o])
                throw std::invalid_argument("arrangement: object " +
                                            std::to_string(o) + " appears twice");
            seen[o] = true;
        }
    }
}

void validate_instance(const Instance& inst) {
    validate_geometry(inst.geometry);
    const long long wd =
        static_cast<long long>(inst.geometry.working_stacks()) * inst.geometry.depth;
    if (inst.n < 1 || inst.n > wd)
        throw std::invalid_argument("instance: n must be in [1, w*d] = [1, " +
                                    std::to_string(wd) + "], got " +
                                    std::to_string(inst.n));
    validate_arrangement(inst.start, inst.geometry, inst.n);
    validate_arrangement(inst.goal, inst.geometry, inst.n);
    if (inst.start.object_count() != inst.n)
        throw std::invalid_argument("instance: start holds " +
                                    std::to_string(inst.start.object_count()) +
                                    " objects, expected n = " + std::to_string(inst.n));
    if (inst.goal.object_count() != inst.n)
        throw std::invalid_argument("instance: goal holds " +
                                    std::to_string(inst.goal.object_count()) +
                                    " objects, expected n = " + std::to_string(inst.n));
}

static void check_action_range(const Action& a, const Geometry& g) {
    if (a.from_stack < 1 || a.from_stack > g.num_stacks || a.to_stack < 1 ||
        a.to_stack > g.num_stacks)
        throw std::invalid_argument("action (" + std::to_string(a.from_stack) +
                                    " -> " + std::to_string(a.to_stack) +
                                    "): stack index outside [1, " +
                                    std::to_string(g.num_stacks) + "]");
    if (a.from_stack == a.to_stack)
        throw std::invalid_argument("action: from_stack == to_stack == " +
                                    std::to_string(a.from_stack));
}

bool is_permissible(const Action& a, const Arrangement& pi, const Geometry& g) {
    check_action_range(a, g);
    return !pi.stack_empty(a.from_stack) && pi.height(a.to_stack) < g.depth;
}

Arrangement apply_action(const Action& a, const Arrangement& pi, const Geometry& g) {
    check_action_range(a, g);
    if (pi.stack_empty(a.from_stack))
        throw std::invalid_argument("action (" + std::to_string(a.from_stack) +
                                    " -> " + std::to_string(a.to_stack) +
                                    "): source stack is empty");
    if (pi.height(a.to_stack) >= g.depth)
        throw std::invalid_argument("action (" + std::to_string(a.from_stack) +
                                    " -> " + std::to_string(a.to_stack) +
                                    "): destination stack is at capacity");
    Arrangement next = pi;
    auto& from = next.mutable_stack(a.from_stack);
    auto& to = next.mutable_stack(a.to_stack);
    ObjectId o = from.front();
    from.erase(from.begin());
    to.insert(to.begin(), o);
    return next;
}

bool is_goal(const Arrangement& pi, const Instance& inst) {
    if (pi.object_count() != inst.n)
        throw std::invalid_argument("is_goal: state holds " +
                                    std::to_string(pi.object_count()) +
                                    " objects, instance expects " +
                                    std::to_string(inst.n));
    if (inst.kind == Kind::Labeled) return pi == inst.goal;
    // Column-labeled: every object must be in its goal stack, depth ignored.
    std::vector<int> goal_stack(static_cast<size_t>(inst.n) + 1, 0);
    for (int s = 1; s <= inst.goal.num_stacks(); ++s)
        for (ObjectId o : inst.goal.stack(s)) goal_stack[o] = s;
    for (int s = 1; s <= pi.num_stacks(); ++s) {
        for (ObjectId o : pi.stack(s)) {
            if (o < 1 || o > inst.n || goal_stack[o] == 0)
                throw std::invalid_argument("is_goal: object " + std::to_string(o) +
                                            " not present in instance goal");
            if (goal_stack[o] != s) return false;
        }
    }
    return true;
}

VerifyReport verify_solution(const Instance& inst, const Solution& sol) {
    VerifyReport rep;
    rep.cost = static_cast<int>(sol.actions.size());
    Arrangement cur = inst.start;
    for (size_t i = 0; i < sol.actions.size(); ++i) {
        const Action& a = sol.actions[i];
        try {
            if (!is_permissible(a, cur, inst.geometry)) {
                rep.failed_step = static_cast<int>(i);
                rep.reason = cur.stack_empty(a.from_stack)
                                 ? "pop from empty stack " + std::to_string(a.from_stack)
                                 : "push to full stack " + std::to_string(a.to_stack);
                return rep;
            }
            cur = apply_action(a, cur, inst.geometry);
        } catch (const std::invalid_argument& e) {
            rep.failed_step = static_cast<int>(i);
            rep.reason = e.what();
            return rep;
        }
    }
    if (!is_goal(cur, inst)) {
        rep.failed_step = static_cast<int>(sol.actions.size());
        rep.reason = "final state does not satisfy the goal";
        return rep;
    }
    if (sol.cost != static_cast<int>(sol.actions.size())) {
        rep.failed_step = static_cast<int>(sol.actions.size());
        rep.reason = "declared cost " + std::to_string(sol.cost) +
                     " != action count " + std::to_string(sol.actions.size());
        return rep;
    }
    rep.ok = true;
    return rep;
}

int canonical_key_width(int n) { return n < 256 ? 1 : 2; }

std::string canonical_key(const Arrangement& pi, const Geometry& g, int n) {
    const int width = canonical_key_width(n);
    std::string key(static_cast<size_t>(g.total_slots()) * width, '\0');
    size_t pos = 0;
    for (int s = 1; s <= g.num_stacks; ++s) {
        const auto& st = pi.stack(s);
        for (int y = 0; y < g.depth; ++y) {
            int id = y < static_cast<int>(st.size()) ? st[y] : 0;
            if (width == 2) key[pos++] = static_cast<char>((id >> 8) & 0xff);
            key[pos++] = static_cast<char>(id & 0xff);
        }
    }
    return key;
}

Arrangement decode_key(const std::string& key, const Geometry& g, int n) {
    const int width = canonical_key_width(n);
    if (key.size() != static_cast<size_t>(g.total_slots()) * width)
        throw std::invalid_argument("decode_key: wrong key size");
    Arrangement out(g.num_stacks);
    size_t pos = 0;
    for (int s = 1; s <= g.num_stacks; ++s) {
        auto& st = out.mutable_stack(s);
        for (int y = 0; y < g.depth; ++y) {
            int id = static_cast<unsigned char>(key[pos++]);
            if (width == 2) id = (id << 8) | static_cast<unsigned char>(key[pos++]);
            if (id != 0) st.push_back(id);
        }
    }
    return out;
}

std::string render(const Arrangement& pi, const Geometry& g) {
    std::ostringstream out;
    for (int y = 1; y <= g.depth; ++y) {
        out << "depth " << y << " |";
        for (int s = 1; s <= g.num_stacks; ++s) {
            if (y <= pi.height(s))
                out << ' ' << pi.at(s, y);
            else
                out << " .";
        }
        out << '\n';
    }
    return out.str();
}

const char* kind_name(Kind k) {
    return k == Kind::Labeled ? "labeled" : "column";
}

}  // namespace stackr
