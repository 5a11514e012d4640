#include "stackr/pmt.hpp"

#include <sstream>
#include <stdexcept>

namespace stackr::pmt {

PebbleTree::PebbleTree(int num_stacks, int depth)
    : num_stacks_(num_stacks), depth_(depth) {
    if (num_stacks < 1 || depth < 1)
        throw std::invalid_argument("pebble tree: num_stacks and depth must be >= 1");
}

std::pair<int, int> PebbleTree::slot_of(int vertex) const {
    if (vertex <= 0 || vertex >= vertex_count())
        throw std::invalid_argument("slot_of: vertex " + std::to_string(vertex) +
                                    " is the root or out of range");
    int stack = (vertex - 1) / depth_ + 1;
    int depth = (vertex - 1) % depth_ + 1;
    return {stack, depth};
}

int PebbleTree::parent(int vertex) const {
    if (vertex == 0) return -1;
    auto [stack, depth] = slot_of(vertex);
    return depth == 1 ? root() : vertex_of(stack, depth - 1);
}

bool PebbleTree::adjacent(int u, int v) const {
    if (u == v) return false;
    return parent(u) == v || parent(v) == u;
}

std::string PebbleTree::dump_edges() const {
    std::ostringstream out;
    for (int v = 1; v < vertex_count(); ++v) out << parent(v) << ' ' << v << '\n';
    return out.str();
}

PebbleConfiguration configuration_of(const Arrangement& pi, const PebbleTree& tree,
                                     int n) {
    PebbleConfiguration cfg(static_cast<size_t>(n) + 1, -1);
    for (int s = 1; s <= pi.num_stacks(); ++s)
        for (int y = 1; y <= pi.height(s); ++y)
            cfg[pi.at(s, y)] = tree.vertex_of(s, y);
    return cfg;
}

Reduction reduce(const Instance& inst) {
    validate_instance(inst);
    if (inst.kind != Kind::Labeled)
        throw std::invalid_argument(
            "reduce: column-labeled instances have no single goal configuration");
    PebbleTree tree(inst.geometry.num_stacks, inst.geometry.depth);
    return Reduction{tree, configuration_of(inst.start, tree, inst.n),
                     configuration_of(inst.goal, tree, inst.n)};
}

std::vector<PebbleMove> actions_to_pebble_moves(const Instance& inst,
                                                const Solution& sol) {
    VerifyReport rep = verify_solution(inst, sol);
    if (!rep.ok)
        throw std::invalid_argument("actions_to_pebble_moves: solution does not "
                                    "verify: " + rep.reason);
    PebbleTree tree(inst.geometry.num_stacks, inst.geometry.depth);
    std::vector<PebbleMove> moves;
    Arrangement cur = inst.start;
    for (const Action& a : sol.actions) {
        const int hi = cur.height(a.from_stack);
        const int hj = cur.height(a.to_stack);
        ObjectId p = cur.at(a.from_stack, 1);
        // Pop: the moving pebble steps onto the root, then the source path
        // slides one step toward the opening.
        moves.push_back({p, tree.vertex_of(a.from_stack, 1), tree.root()});
        for (int y = 2; y <= hi; ++y)
            moves.push_back({cur.at(a.from_stack, y),
                             tree.vertex_of(a.from_stack, y),
                             tree.vertex_of(a.from_stack, y - 1)});
        // Push: the destination path slides away from the opening (deepest
        // first, so every step lands on an empty vertex), then the pebble
        // descends from the root.
        for (int y = hj; y >= 1; --y)
            moves.push_back({cur.at(a.to_stack, y), tree.vertex_of(a.to_stack, y),
                             tree.vertex_of(a.to_stack, y + 1)});
        moves.push_back({p, tree.root(), tree.vertex_of(a.to_stack, 1)});
        cur = apply_action(a, cur, inst.geometry);
    }
    return moves;
}

namespace {

struct Tracker {
    const PebbleTree& tree;
    std::vector<int> vertex_of_pebble;  // by id
    std::vector<int> pebble_at_vertex;  // by vertex, 0 = empty

    Tracker(const PebbleTree& t, const PebbleConfiguration& start, int n)
        : tree(t),
          vertex_of_pebble(start),
          pebble_at_vertex(static_cast<size_t>(t.vertex_count()), 0) {
        for (int o = 1; o <= n; ++o) {
            if (start[o] < 0) continue;
            pebble_at_vertex[start[o]] = o;
        }
    }

    void step(const PebbleMove& m, size_t index) {
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("pebble move " + std::to_string(index) +
                                        ": " + why);
        };
        if (m.pebble < 1 || m.pebble >= static_cast<int>(vertex_of_pebble.size()))
            fail("unknown pebble " + std::to_string(m.pebble));
        if (m.from_vertex < 0 || m.from_vertex >= tree.vertex_count() ||
            m.to_vertex < 0 || m.to_vertex >= tree.vertex_count())
            fail("vertex out of range");
        if (vertex_of_pebble[m.pebble] != m.from_vertex)
            fail("pebble " + std::to_string(m.pebble) + " is not on vertex " +
                 std::to_string(m.from_vertex));
        if (!tree.adjacent(m.from_vertex, m.to_vertex))
            fail("vertices " + std::to_string(m.from_vertex) + " and " +
                 std::to_string(m.to_vertex) + " are not adjacent");
        if (pebble_at_vertex[m.to_vertex] != 0)
            fail("target vertex " + std::to_string(m.to_vertex) + " is occupied");
        pebble_at_vertex[m.from_vertex] = 0;
        pebble_at_vertex[m.to_vertex] = m.pebble;
        vertex_of_pebble[m.pebble] = m.to_vertex;
    }
};

}  // namespace

void check_execution(const PebbleTree& tree, const PebbleConfiguration& start,
                     const std::vector<PebbleMove>& moves) {
    Tracker tr(tree, start, static_cast<int>(start.size()) - 1);
    for (size_t i = 0; i < moves.size(); ++i) tr.step(moves[i], i);
}

Solution pebble_moves_to_actions(const Instance& inst,
                                 const std::vector<PebbleMove>& moves) {
    validate_instance(inst);
    PebbleTree tree(inst.geometry.num_stacks, inst.geometry.depth);
    Tracker tr(tree, configuration_of(inst.start, tree, inst.n), inst.n);
    Solution sol;
    int pending_pebble = 0;   // pebble currently on the root
    int pending_stack = 0;    // the path it came from
    for (size_t i = 0; i < moves.size(); ++i) {
        const PebbleMove& m = moves[i];
        tr.step(m, i);
        if (m.to_vertex == tree.root()) {
            pending_pebble = m.pebble;
            pending_stack = tree.slot_of(m.from_vertex).first;
        } else if (m.from_vertex == tree.root()) {
            int dest = tree.slot_of(m.to_vertex).first;
            if (m.pebble != pending_pebble)
                throw std::invalid_argument("pebble move " + std::to_string(i) +
                                            ": pebble left the root without entering it");
            if (dest == pending_stack)
                throw std::invalid_argument("pebble move " + std::to_string(i) +
                                            ": root traversal returns to stack " +
                                            std::to_string(dest) +
                                            ", which is not a pop-and-push");
            sol.actions.push_back(Action{pending_stack, dest});
            pending_pebble = 0;
        }
    }
    if (pending_pebble != 0)
        throw std::invalid_argument("pebble " + std::to_string(pending_pebble) +
                                    " is stranded on the root; the execution has "
                                    "no arrangement equivalent");
    sol.cost = static_cast<int>(sol.actions.size());
    return sol;
}

}  // namespace stackr::pmt
