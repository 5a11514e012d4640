#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "stackr/core.hpp"
#include "stackr/heuristics.hpp"

// State-space search over arrangements with duplicate detection keyed on
// canonical_key. BFS and A* run forward; Bi-BFS and BHPA additionally search
// backward from the goal, which is sound because every pop-and-push action is
// invertible. Backward search requires a unique goal state, so those two
// algorithms reject column-labeled instances.

namespace stackr::search {

enum class Algorithm { BFS, BiBFS, AStar, BHPA };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SearchConfig {
    Algorithm algorithm = Algorithm::AStar;
    heuristics::HeuristicKind heuristic = heuristics::HeuristicKind::CBH;
    double weight = 1.0;  // omega >= 1; f = g + omega * h
    std::chrono::milliseconds timeout{5000};
    int expansion_check_interval = 1024;
};

enum class SolveStatus { Solved, Timeout, Unsolvable };

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unsolvable;
    Solution solution;  // meaningful iff status == Solved
    SolverStats stats;
};

// All permissible successors ordered by (from_stack, to_stack) ascending.
std::vector<std::pair<Action, Arrangement>> expand(const Arrangement& pi,
                                                   const Geometry& g);

SolveOutcome solve(const Instance& inst, const SearchConfig& cfg);

}  // namespace stackr::search
