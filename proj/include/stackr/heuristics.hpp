#pragma once

#include <string>
#include <vector>

#include "stackr/core.hpp"

// Heuristic value functions over arrangements.
//
// DBH estimates the pop-and-push count for a single object from its current
// and goal depths; DBH1 takes the maximum over objects (admissible), DBHn the
// sum (inadmissible). CBH charges each object 1 or 2 actions for reaching its
// goal stack, in O(n) per state. All of them are 0 exactly on goal states.

namespace stackr::heuristics {

enum class HeuristicKind { DBH1, DBHn, CBH, CBHplusDBH1, Zero };

bool is_admissible(HeuristicKind k);
const char* heuristic_name(HeuristicKind k);
HeuristicKind heuristic_from_name(const std::string& name);

// Single-object estimate per DBH; labeled goals only (needs goal depths).
int dbh(ObjectId o, const Arrangement& pi_c, const Arrangement& pi_g,
        const Geometry& g, int n);

int dbh1(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g, int n);
int dbhn(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g, int n);

// Works for both kinds: for column-labeled goals the capacity test uses goal
// depth 1, the most optimistic value, which keeps the estimate admissible.
int cbh(const Arrangement& pi_c, const Arrangement& pi_g, const Geometry& g,
        int n, Kind kind = Kind::Labeled);

int combined_max(const Arrangement& pi_c, const Arrangement& pi_g,
                 const Geometry& g, int n);

// Evaluates heuristics directly on canonical-key byte strings, with goal
// metadata precomputed once. Holds scratch buffers, so one instance must not
// be shared across threads; construction is cheap.
class Evaluator {
public:
    // `goal` is the arrangement the estimate is measured toward (the instance
    // goal for forward search, the instance start for backward search).
    Evaluator(const Geometry& g, int n, Kind kind, const Arrangement& goal,
              HeuristicKind heuristic);

    int evaluate(const std::string& key);

    HeuristicKind kind() const { return heuristic_; }

private:
    Geometry geom_;
    int n_;
    Kind goal_kind_;
    HeuristicKind heuristic_;
    int width_;
    long long free_slots_;
    std::vector<int> goal_stack_;   // by id
    std::vector<int> goal_depth_;   // by id; 1 for column-labeled goals
    std::vector<int> goal_bottom_;  // by id; stable-frame goal position
    std::vector<int> cur_stack_;    // scratch, by id
    std::vector<int> cur_depth_;    // scratch, by id
    std::vector<int> cur_bottom_;   // scratch, by id

    int cell(const std::string& key, std::size_t at) const;
    void read_positions(const std::string& key);
    int eval_dbh(ObjectId o) const;
    int eval_dbh1() const;
    int eval_dbhn() const;
    int eval_cbh(const std::string& key) const;
};

}  // namespace stackr::heuristics
