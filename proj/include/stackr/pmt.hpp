#pragma once

#include <string>
#include <vector>

#include "stackr/core.hpp"

// Reduction of labeled stack rearrangement to Pebble Motion on Trees.
//
// The tree has one path of `depth` vertices per stack, all joined at a root:
// root = vertex 0, path s = vertices (s-1)*d+1 .. s*d ordered depth 1 -> d.
// A pop-and-push corresponds to a pebble walking up its path, through the
// root, and down the destination path; the slide of the remaining stack
// contents maps to one-step shifts inside a path, made explicit here so the
// move sequence is a legal pebble execution.

namespace stackr::pmt {

class PebbleTree {
public:
    PebbleTree(int num_stacks, int depth);

    int vertex_count() const { return num_stacks_ * depth_ + 1; }
    int edge_count() const { return vertex_count() - 1; }
    int root() const { return 0; }

    int vertex_of(int stack, int depth) const {
        return (stack - 1) * depth_ + depth;
    }
    // (stack, depth) of a non-root vertex.
    std::pair<int, int> slot_of(int vertex) const;

    // Parent link; the root's parent is -1. The parent of a depth-1 vertex is
    // the root, of a depth-y vertex the depth-(y-1) vertex of the same path.
    int parent(int vertex) const;
    bool adjacent(int u, int v) const;

    // Edge list, one "u v" line per edge.
    std::string dump_edges() const;

private:
    int num_stacks_;
    int depth_;
};

// Pebble -> vertex map, indexed by object id (entry 0 unused, -1 = absent).
using PebbleConfiguration = std::vector<int>;

struct PebbleMove {
    ObjectId pebble = 0;
    int from_vertex = -1;
    int to_vertex = -1;
    bool operator==(const PebbleMove&) const = default;
};

struct Reduction {
    PebbleTree tree;
    PebbleConfiguration start;  // x_I
    PebbleConfiguration goal;   // x_G
};

// Builds the tree and both configurations. Rejects column-labeled instances
// (their goal configuration is not a single pebble placement).
Reduction reduce(const Instance& inst);

PebbleConfiguration configuration_of(const Arrangement& pi, const PebbleTree& tree,
                                     int n);

// Expands a verified solution into a legal pebble execution from x_I to x_G.
// Throws std::invalid_argument if the solution does not verify.
std::vector<PebbleMove> actions_to_pebble_moves(const Instance& inst,
                                                const Solution& sol);

// Collapses a legal pebble execution back into pop-and-push actions: one
// action per maximal traversal through the root; intra-path shifts emit
// nothing. Throws std::invalid_argument naming the offending move index on
// an illegal move, and rejects executions that leave a pebble on the root.
Solution pebble_moves_to_actions(const Instance& inst,
                                 const std::vector<PebbleMove>& moves);

// Validates a move sequence step by step (adjacency, target emptiness,
// pebble placement). Throws std::invalid_argument with the move index.
void check_execution(const PebbleTree& tree, const PebbleConfiguration& start,
                     const std::vector<PebbleMove>& moves);

}  // namespace stackr::pmt
