#pragma once

#include <string>

#include "stackr/core.hpp"

// JSON file formats.
//
// Instance (one document per file):
//   { "version": 1,
//     "num_stacks": 6, "depth": 5, "n": 10,
//     "kind": "labeled" | "column",
//     "start": [[...top-first ids...], ..., []],
//     "goal":  [[...], ..., []] }
//
// Solution: {"cost": k, "actions": [[i,j], ...]}
//
// Parse errors throw std::invalid_argument naming the offending field.

namespace stackr::io {

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);

std::string stats_to_json(const SolverStats& stats);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
Solution load_solution(const std::string& path);
void save_solution(const Solution& sol, const std::string& path);

}  // namespace stackr::io
