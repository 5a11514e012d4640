#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

// Domain model for stack rearrangement: a board of `num_stacks` LIFO stacks
// of capacity `depth`, holding distinct objects 1..n.  The last stack is the
// buffer by convention; the model itself treats all stacks alike.
//
// Depth is counted from the accessible end: the object at depth 1 is the one
// a pop removes.  Stack contents are stored top-first, so stacks[s][0] is the
// depth-1 object.  All stack indices in the public API are 1-based.

namespace stackr {

using ObjectId = int;  // 1..n; 0 denotes an empty slot in encodings

struct Geometry {
    int num_stacks = 0;  // total stacks including the buffer (>= 3)
    int depth = 0;       // per-stack capacity (>= 1)

    int working_stacks() const { return num_stacks - 1; }  // stacks 1..w
    int buffer_stack() const { return num_stacks; }
    long long total_slots() const {
        return static_cast<long long>(num_stacks) * depth;
    }
    bool operator==(const Geometry&) const = default;
};

// Throws std::invalid_argument if the geometry is out of range.
void validate_geometry(const Geometry& g);

enum class Kind { Labeled, ColumnLabeled };

struct Action {
    int from_stack = 0;
    int to_stack = 0;
    bool operator==(const Action&) const = default;
};

class Arrangement {
public:
    Arrangement() = default;
    explicit Arrangement(int num_stacks) : stacks_(num_stacks) {}
    explicit Arrangement(std::vector<std::vector<ObjectId>> stacks)
        : stacks_(std::move(stacks)) {}

    int num_stacks() const { return static_cast<int>(stacks_.size()); }
    int height(int stack) const {
        return static_cast<int>(stacks_[stack - 1].size());
    }
    bool stack_empty(int stack) const { return stacks_[stack - 1].empty(); }

    // Top-first contents of a stack (element 0 is at depth 1).
    const std::vector<ObjectId>& stack(int stack) const {
        return stacks_[stack - 1];
    }
    ObjectId at(int stack, int depth) const {
        return stacks_[stack - 1][depth - 1];
    }

    std::vector<ObjectId>& mutable_stack(int stack) { return stacks_[stack - 1]; }

    // Total number of objects on the board.
    int object_count() const;

    // (stack, depth) of object o, or (0, 0) if absent.  Linear scan; callers
    // that need many lookups should build a position index once.
    std::pair<int, int> find(ObjectId o) const;

    bool operator==(const Arrangement&) const = default;

private:
    std::vector<std::vector<ObjectId>> stacks_;
};

// Checks injectivity, capacity and id range (1..n). Contiguity is implied by
// the dense representation. Throws std::invalid_argument on violation.
void validate_arrangement(const Arrangement& a, const Geometry& g, int n);

struct Instance {
    Geometry geometry;
    int n = 0;
    Arrangement start;
    Arrangement goal;
    Kind kind = Kind::Labeled;
};

// Full instance validation: geometry, both arrangements, identical object
// sets, n <= w*d. Throws std::invalid_argument with the offending detail.
void validate_instance(const Instance& inst);

struct SolverStats {
    std::uint64_t expansions = 0;
    std::uint64_t generations = 0;
    double elapsed_ms = 0.0;
    std::uint64_t peak_open = 0;
    std::uint64_t peak_closed = 0;
    // Bidirectional bookkeeping; -1 when not applicable.
    long long f_forward = -1;
    long long f_backward = -1;
    long long mu = -1;
};

struct Solution {
    std::vector<Action> actions;
    int cost = 0;  // == actions.size()
    SolverStats stats;
};

// True iff `a` pops from a non-empty stack and pushes to a stack below
// capacity. Throws std::invalid_argument if the indices are out of range.
bool is_permissible(const Action& a, const Arrangement& pi, const Geometry& g);

// Applies a pop-and-push, returning the successor state; `pi` is untouched.
// Throws std::invalid_argument naming the violated rule if not permissible.
Arrangement apply_action(const Action& a, const Arrangement& pi, const Geometry& g);

// Labeled: exact equality with inst.goal. ColumnLabeled: per-object stack
// membership only. Throws on object-set mismatch.
bool is_goal(const Arrangement& pi, const Instance& inst);

struct VerifyReport {
    bool ok = false;
    int failed_step = -1;    // 0-based index of the first bad action
    std::string reason;      // empty when ok
    int cost = 0;            // number of actions replayed
};

// Replays `sol.actions` from inst.start; never throws for replay failures
// (they are report values).
VerifyReport verify_solution(const Instance& inst, const Solution& sol);

// Canonical fixed-size byte encoding of an arrangement: one digit per slot
// (0 = empty), stack-major then depth-minor, each digit stored big-endian in
// the minimum byte width that holds n.  Injective for a fixed geometry and
// stable across runs.
std::string canonical_key(const Arrangement& pi, const Geometry& g, int n);
int canonical_key_width(int n);  // bytes per slot
Arrangement decode_key(const std::string& key, const Geometry& g, int n);

// Human-readable grid, depth-1 row nearest the opening.
std::string render(const Arrangement& pi, const Geometry& g);

const char* kind_name(Kind k);

}  // namespace stackr
