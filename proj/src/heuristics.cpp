#include "stackr/heuristics.hpp"

#include <algorithm>
#include <stdexcept>

namespace stackr::heuristics {

bool is_admissible(HeuristicKind k) { return k != HeuristicKind::DBHn; }

const char* heuristic_name(HeuristicKind k) {
    switch (k) {
        case HeuristicKind::DBH1: return "dbh1";
        case HeuristicKind::DBHn: return "dbhn";
        case HeuristicKind::CBH: return "cbh";
        case HeuristicKind::CBHplusDBH1: return "cbh+dbh1";
        case HeuristicKind::Zero: return "zero";
    }
    return "?";
}

HeuristicKind heuristic_from_name(const std::string& name) {
    if (name == "dbh1") return HeuristicKind::DBH1;
    if (name == "dbhn") return HeuristicKind::DBHn;
    if (name == "cbh") return HeuristicKind::CBH;
    if (name == "cbh+dbh1") return HeuristicKind::CBHplusDBH1;
    if (name == "zero") return HeuristicKind::Zero;
    throw std::invalid_argument("unknown heuristic: " + name +
                                " (expected dbh1, dbhn, cbh, cbh+dbh1 or zero)");
}

// Position bookkeeping. Two coordinate frames matter:
//  - depth (1 = accessible end) counts the objects in front of a slot; this
//    is what evacuations and insertions cost.
//  - the bottom-anchored position height - depth is stable under pushes and
//    pops above the object, so it decides whether an object ever has to
//    move at all: an object whose stack and bottom-anchored position match
//    the goal's can sink into place while others are stacked on top.
// At-goal and misplacement tests use the stable frame; n_c/n_g and the
// free-slot test use front counts. Mixing the frames the other way around
// overestimates and breaks admissibility.
namespace {

struct Frame {
    int stack = 0;
    int depth = 0;   // from the accessible end, 1-based
    int bottom = 0;  // from the closed end, 1-based
};

struct Positions {
    std::vector<Frame> at;  // by id
    explicit Positions(int n) : at(n + 1) {}
};

Positions positions_of(const Arrangement& a, int n, const char* what) {
    Positions pos(n);
    for (int s = 1; s <= a.num_stacks(); ++s) {
        const int h = a.height(s);
        for (int y = 1; y <= h; ++y) {
            ObjectId o = a.at(s, y);
            if (o < 1 || o > n)
                throw std::invalid_argument(std::string(what) + ": object id " +
                                            std::to_string(o) + " outside [1, n]");
            pos.at[o] = Frame{s, y, h - y + 1};
        }
    }
    for (int o = 1; o <= n; ++o)
        if (pos.at[o].stack == 0)
            throw std::invalid_argument(std::string(what) + ": object " +
                                        std::to_string(o) + " is missing");
    return pos;
}

long long free_slot_count(const Geometry& g, int n) { return g.total_slots() - n; }

bool settled(const Frame& cur, const Frame& goal) {
    return cur.stack == goal.stack && cur.bottom == goal.bottom;
}

int dbh_value(const Frame& cur, const Frame& goal, long long free_slots) {
    if (settled(cur, goal)) return 0;
    const int n_c = cur.depth - 1;
    const int n_g = goal.depth - 1;
    if (cur.stack == goal.stack)
        return n_c > n_g ? 2 * n_c - n_g + 2 : n_g + 2;
    return cur.depth + goal.depth - 1 <= free_slots ? n_c + n_g + 1
                                                    : n_c + n_g + 2;
}

}  // namespace

int dbh(ObjectId o, const Arrangement& pi_c, const Arrangement& pi_g,
        const Geometry& g, int n) {
    auto [cs, cd] = pi_c.find(o);
    auto [gs, gd] = pi_g.find(o);
    if (cs == 0 || gs == 0)
        throw std::invalid_argument("dbh: object " + std::to_string(o) +
                                    " absent from an arrangement");
    Frame cur{cs, cd, pi_c.height(cs) - cd + 1};
    Frame goal{gs, gd, pi_g.height(gs) - gd + 1};
    return dbh_value(cur, goal, free_slot_count(g, n));
}

int dbh1(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g, int n) {
    Positions cur = positions_of(pi_c, n, "dbh1 current");
    Positions goal = positions_of(pi_g, n, "dbh1 goal");
    const long long free_slots = free_slot_count(g, n);
    int best = 0;
    for (int o = 1; o <= n; ++o)
        best = std::max(best, dbh_value(cur.at[o], goal.at[o], free_slots));
    return best;
}

int dbhn(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g, int n) {
    Positions cur = positions_of(pi_c, n, "dbhn current");
    Positions goal = positions_of(pi_g, n, "dbhn goal");
    const long long free_slots = free_slot_count(g, n);
    int sum = 0;
    for (int o = 1; o <= n; ++o)
        sum += dbh_value(cur.at[o], goal.at[o], free_slots);
    return sum;
}

int cbh(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g,
        int n, Kind kind) {
    Positions goal = positions_of(pi_g, n, "cbh goal");
    const long long free_slots = free_slot_count(g, n);
    int h = 0;
    for (int s = 1; s <= pi_c.num_stacks(); ++s) {
        const int height = pi_c.height(s);
        // Bottom-up pass: deeper_misplaced covers all strictly deeper slots.
        bool deeper_misplaced = false;
        for (int y = height; y >= 1; --y) {
            ObjectId o = pi_c.at(s, y);
            if (o < 1 || o > n || goal.at[o].stack == 0)
                throw std::invalid_argument("cbh: object " + std::to_string(o) +
                                            " absent from the goal");
            const bool same_stack = goal.at[o].stack == s;
            if (same_stack) {
                if (deeper_misplaced) h += 2;
            } else {
                const int gd = kind == Kind::Labeled ? goal.at[o].depth : 1;
                h += free_slots < y + gd - 1 ? 2 : 1;
            }
            const bool misplaced =
                kind == Kind::Labeled
                    ? !(same_stack && goal.at[o].bottom == height - y + 1)
                    : !same_stack;
            deeper_misplaced = deeper_misplaced || misplaced;
        }
    }
    return h;
}

int combined_max(const Arrangement& pi_c, const Arrangement& pi_g,
                 const Geometry& g, int n) {
    return std::max(cbh(pi_c, pi_g, g, n), dbh1(pi_c, pi_g, g, n));
}

Evaluator::Evaluator(const Geometry& g, int n, Kind kind, const Arrangement& goal,
                     HeuristicKind heuristic)
    : geom_(g),
      n_(n),
      goal_kind_(kind),
      heuristic_(heuristic),
      width_(canonical_key_width(n)),
      free_slots_(free_slot_count(g, n)),
      goal_stack_(n + 1, 0),
      goal_depth_(n + 1, 1),
      goal_bottom_(n + 1, 0),
      cur_stack_(n + 1, 0),
      cur_depth_(n + 1, 0),
      cur_bottom_(n + 1, 0) {
    for (int s = 1; s <= goal.num_stacks(); ++s) {
        const int h = goal.height(s);
        for (int y = 1; y <= h; ++y) {
            ObjectId o = goal.at(s, y);
            goal_stack_[o] = s;
            if (kind == Kind::Labeled) {
                goal_depth_[o] = y;
                goal_bottom_[o] = h - y + 1;
            }
        }
    }
}

int Evaluator::cell(const std::string& key, std::size_t at) const {
    int id = static_cast<unsigned char>(key[at]);
    if (width_ == 2) id = (id << 8) | static_cast<unsigned char>(key[at + 1]);
    return id;
}

void Evaluator::read_positions(const std::string& key) {
    std::size_t pos = 0;
    for (int s = 1; s <= geom_.num_stacks; ++s) {
        const std::size_t base = pos;
        int height = 0;
        while (height < geom_.depth &&
               cell(key, base + static_cast<std::size_t>(height) * width_) != 0)
            ++height;
        for (int y = 1; y <= height; ++y) {
            int id = cell(key, base + static_cast<std::size_t>(y - 1) * width_);
            cur_stack_[id] = s;
            cur_depth_[id] = y;
            cur_bottom_[id] = height - y + 1;
        }
        pos = base + static_cast<std::size_t>(geom_.depth) * width_;
    }
}

int Evaluator::eval_dbh(ObjectId o) const {
    Frame cur{cur_stack_[o], cur_depth_[o], cur_bottom_[o]};
    Frame goal{goal_stack_[o], goal_depth_[o], goal_bottom_[o]};
    return dbh_value(cur, goal, free_slots_);
}

int Evaluator::eval_dbh1() const {
    int best = 0;
    for (int o = 1; o <= n_; ++o) best = std::max(best, eval_dbh(o));
    return best;
}

int Evaluator::eval_dbhn() const {
    int sum = 0;
    for (int o = 1; o <= n_; ++o) sum += eval_dbh(o);
    return sum;
}

int Evaluator::eval_cbh(const std::string& key) const {
    int h = 0;
    std::size_t base = 0;
    for (int s = 1; s <= geom_.num_stacks;
         ++s, base += static_cast<std::size_t>(geom_.depth) * width_) {
        int height = 0;
        while (height < geom_.depth &&
               cell(key, base + static_cast<std::size_t>(height) * width_) != 0)
            ++height;
        bool deeper_misplaced = false;
        for (int y = height; y >= 1; --y) {
            const int o = cell(key, base + static_cast<std::size_t>(y - 1) * width_);
            const bool same_stack = goal_stack_[o] == s;
            if (same_stack) {
                if (deeper_misplaced) h += 2;
            } else {
                h += free_slots_ < y + goal_depth_[o] - 1 ? 2 : 1;
            }
            const bool misplaced =
                goal_kind_ == Kind::Labeled
                    ? !(same_stack && goal_bottom_[o] == height - y + 1)
                    : !same_stack;
            deeper_misplaced = deeper_misplaced || misplaced;
        }
    }
    return h;
}

int Evaluator::evaluate(const std::string& key) {
    switch (heuristic_) {
        case HeuristicKind::Zero:
            return 0;
        case HeuristicKind::CBH:
            return eval_cbh(key);
        case HeuristicKind::DBH1:
            read_positions(key);
            return eval_dbh1();
        case HeuristicKind::DBHn:
            read_positions(key);
            return eval_dbhn();
        case HeuristicKind::CBHplusDBH1: {
            read_positions(key);
            return std::max(eval_cbh(key), eval_dbh1());
        }
    }
    return 0;
}

}  // namespace stackr::heuristics
