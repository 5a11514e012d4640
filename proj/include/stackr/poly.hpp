#pragma once

#include <vector>

#include "stackr/core.hpp"

// Constructive polynomial-time solvers with bounded action counts.
//
//  - poly_d_solve:    places objects per target stack, deepest goal slot
//                     first, O(d) actions per object => O(w d^2) total.
//  - sort_stack:      recursive halving sort of one stack using a helper
//                     stack and an empty buffer stack, O(d log d) actions;
//                     helper and buffer are restored exactly.
//  - poly_clsr_solve: divide-and-conquer on stack indices for column goals,
//                     O(w d log w) actions.
//  - poly_lsr_solve:  poly_clsr_solve followed by per-stack sort_stack,
//                     O(w d max{log d, log w}) actions.
//
// The solvers emit actions against an internal board that rejects any
// impermissible move, so a returned Solution is valid by construction; the
// goal condition is checked before returning.

namespace stackr::poly {

// Contractual worst-case action bounds for this implementation.
long long poly_d_cost_bound(int w, int d);
long long sort_stack_cost_bound(int d);
long long poly_clsr_cost_bound(int w, int d);
long long poly_lsr_cost_bound(int w, int d);

// Requires a labeled instance with an empty buffer stack (w+1) in both start
// and goal. Throws std::invalid_argument otherwise.
Solution poly_d_solve(const Instance& inst);

// Sorts target_stack into desired_order (top-first) using helper_stack and an
// empty buffer_stack; all three distinct. The target must hold exactly the
// objects of desired_order. Helper and buffer end bitwise-identical to their
// input state. Returns the emitted actions.
std::vector<Action> sort_stack(const Arrangement& pi, const Geometry& g,
                               int target_stack, int helper_stack,
                               int buffer_stack,
                               const std::vector<ObjectId>& desired_order);

// Column goal: every object reaches its goal stack, depth free. Accepts
// labeled instances interpreted column-wise. Requires an empty buffer in the
// start state and no goal placements on the buffer stack.
Solution poly_clsr_solve(const Instance& inst);

Solution poly_lsr_solve(const Instance& inst);

// Test hook: runs exactly one partition iteration of the column solver on
// the full window and returns the resulting arrangement (left-half objects
// collected in stacks 1..ceil(w/2)).
Arrangement clsr_first_pass(const Instance& inst);

}  // namespace stackr::poly
