#include "stackr/search.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace stackr::search {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::BFS: return "bfs";
        case Algorithm::BiBFS: return "bibfs";
        case Algorithm::AStar: return "astar";
        case Algorithm::BHPA: return "bhpa";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "bfs") return Algorithm::BFS;
    if (name == "bibfs") return Algorithm::BiBFS;
    if (name == "astar") return Algorithm::AStar;
    if (name == "bhpa") return Algorithm::BHPA;
    throw std::invalid_argument("unknown algorithm: " + name +
                                " (expected bfs, bibfs, astar or bhpa)");
}

std::vector<std::pair<Action, Arrangement>> expand(const Arrangement& pi,
                                                   const Geometry& g) {
    std::vector<std::pair<Action, Arrangement>> out;
    for (int f = 1; f <= g.num_stacks; ++f) {
        if (pi.stack_empty(f)) continue;
        for (int t = 1; t <= g.num_stacks; ++t) {
            if (t == f || pi.height(t) >= g.depth) continue;
            Action a{f, t};
            out.emplace_back(a, apply_action(a, pi, g));
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Byte-level pop-and-push on canonical-key strings; the key itself is the
// search state, so no Arrangement values are built in the inner loop.
struct Codec {
    int num_stacks, depth, width;

    Codec(const Geometry& g, int n)
        : num_stacks(g.num_stacks), depth(g.depth), width(canonical_key_width(n)) {}

    size_t base(int s) const { return static_cast<size_t>(s - 1) * depth * width; }

    int cell(const std::string& k, size_t at) const {
        int id = static_cast<unsigned char>(k[at]);
        if (width == 2) id = (id << 8) | static_cast<unsigned char>(k[at + 1]);
        return id;
    }

    int height(const std::string& k, int s) const {
        size_t b = base(s);
        int h = 0;
        while (h < depth && cell(k, b + static_cast<size_t>(h) * width) != 0) ++h;
        return h;
    }

    // `out` must hold a copy of the parent key; applies (f -> t) in place.
    void move_in_place(std::string& out, int f, int t, int hf, int ht) const {
        size_t fb = base(f), tb = base(t);
        char id0 = out[fb];
        char id1 = width == 2 ? out[fb + 1] : char(0);
        std::memmove(&out[fb], &out[fb + width], static_cast<size_t>(hf - 1) * width);
        std::memset(&out[fb + static_cast<size_t>(hf - 1) * width], 0, width);
        std::memmove(&out[tb + width], &out[tb], static_cast<size_t>(ht) * width);
        out[tb] = id0;
        if (width == 2) out[tb + 1] = id1;
    }
};

struct Deadline {
    Clock::time_point end;

    explicit Deadline(std::chrono::milliseconds timeout)
        : end(Clock::now() + timeout) {}
    bool expired() const { return Clock::now() >= end; }
};

struct GoalTest {
    bool labeled = true;
    std::string goal_key;
    std::vector<int> goal_stack;  // by id, for column goals
    const Codec* codec = nullptr;

    bool operator()(const std::string& key) const {
        if (labeled) return key == goal_key;
        for (int s = 1; s <= codec->num_stacks; ++s) {
            size_t b = codec->base(s);
            for (int y = 0; y < codec->depth; ++y) {
                int id = codec->cell(key, b + static_cast<size_t>(y) * codec->width);
                if (id == 0) break;
                if (goal_stack[id] != s) return false;
            }
        }
        return true;
    }
};

struct NodeRec {
    int g = 0;
    int h = 0;
    const NodeRec* parent = nullptr;
    Action act{};
    bool closed = false;
    const std::string* key = nullptr;
};

struct HeapEntry {
    double f;
    int g;
    NodeRec* rec;
};

// Min-f; ties prefer larger g, then lower canonical key, for reproducibility.
struct EntryWorse {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return *a.rec->key > *b.rec->key;
    }
};

std::vector<Action> path_from_root(const NodeRec* rec) {
    std::vector<Action> acts;
    for (const NodeRec* r = rec; r->parent != nullptr; r = r->parent)
        acts.push_back(r->act);
    std::reverse(acts.begin(), acts.end());
    return acts;
}

// Forward continuation of a backward path: walk from the meet node up to the
// backward root, inverting each action.
void append_inverted(std::vector<Action>& acts, const NodeRec* rec) {
    for (const NodeRec* r = rec; r->parent != nullptr; r = r->parent)
        acts.push_back(Action{r->act.to_stack, r->act.from_stack});
}

// Best-first search in one direction: node table keyed by canonical key, a
// lazy-deletion heap, weighted f = g + w*h. Entries are pushed only on strict
// g improvement, so an entry is current iff its g matches the node's; a
// closed node rediscovered with a smaller g is reopened by its fresh entry.
class Side {
public:
    Side(const Geometry& geom, int n, Kind kind, const Arrangement& toward,
         heuristics::HeuristicKind heuristic, double weight,
         const std::string& root_key)
        : eval_(geom, n, kind, toward, heuristic), weight_(weight) {
        NodeRec* root = relax(root_key, 0, nullptr, Action{});
        (void)root;
    }

    bool open_empty() {
        skim();
        return open_.empty();
    }
    size_t open_size() const { return open_.size(); }

    double min_f() {
        skim();
        return open_.empty() ? kInf : open_.top().f;
    }

    NodeRec* pop() {
        skim();
        if (open_.empty()) return nullptr;
        NodeRec* rec = open_.top().rec;
        open_.pop();
        if (!rec->closed) {
            rec->closed = true;
            ++closed_count_;
        }
        return rec;
    }

    NodeRec* relax(const std::string& key, int g, const NodeRec* parent, Action act) {
        auto [it, inserted] = table_.try_emplace(key);
        NodeRec& rec = it->second;
        if (inserted) {
            rec.key = &it->first;
            rec.h = eval_.evaluate(key);
        } else if (g >= rec.g) {
            return nullptr;
        }
        rec.g = g;
        rec.parent = parent;
        rec.act = act;
        open_.push(HeapEntry{rec.g + weight_ * rec.h, rec.g, &rec});
        return &rec;
    }

    const NodeRec* lookup(const std::string& key) const {
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second;
    }

    size_t closed_count() const { return closed_count_; }

private:
    void skim() {
        while (!open_.empty() && open_.top().g != open_.top().rec->g) open_.pop();
    }

    heuristics::Evaluator eval_;
    double weight_;
    std::unordered_map<std::string, NodeRec> table_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, EntryWorse> open_;
    size_t closed_count_ = 0;
};

struct Searcher {
    const Instance& inst;
    const SearchConfig& cfg;
    Codec codec;
    Deadline deadline;
    SolverStats stats;
    Clock::time_point started = Clock::now();
    std::string scratch;

    Searcher(const Instance& i, const SearchConfig& c)
        : inst(i), cfg(c), codec(i.geometry, i.n), deadline(c.timeout) {}

    void finish_stats() {
        stats.elapsed_ms =
            std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    }

    SolveOutcome done(SolveStatus status, std::vector<Action> acts = {}) {
        finish_stats();
        SolveOutcome out;
        out.status = status;
        out.stats = stats;
        if (status == SolveStatus::Solved) {
            out.solution.actions = std::move(acts);
            out.solution.cost = static_cast<int>(out.solution.actions.size());
            out.solution.stats = stats;
            VerifyReport rep = verify_solution(inst, out.solution);
            if (!rep.ok)
                throw std::logic_error("search produced an invalid solution: " +
                                       rep.reason);
        }
        return out;
    }

    // Applies fn(action, successor_key) for each permissible successor in
    // (from, to) ascending order. fn returns true to stop early.
    template <typename Fn>
    bool for_each_successor(const std::string& key, Fn&& fn) {
        int heights[64];
        std::vector<int> big;
        int* hs = heights;
        if (codec.num_stacks > 64) {
            big.resize(codec.num_stacks);
            hs = big.data();
        }
        for (int s = 1; s <= codec.num_stacks; ++s) hs[s - 1] = codec.height(key, s);
        for (int f = 1; f <= codec.num_stacks; ++f) {
            if (hs[f - 1] == 0) continue;
            for (int t = 1; t <= codec.num_stacks; ++t) {
                if (t == f || hs[t - 1] >= codec.depth) continue;
                scratch = key;
                codec.move_in_place(scratch, f, t, hs[f - 1], hs[t - 1]);
                ++stats.generations;
                if (fn(Action{f, t}, scratch)) return true;
            }
        }
        return false;
    }

    SolveOutcome run_astar();
    SolveOutcome run_bfs();
    SolveOutcome run_bibfs();
    SolveOutcome run_bhpa();
};

SolveOutcome Searcher::run_astar() {
    const std::string root = canonical_key(inst.start, inst.geometry, inst.n);
    GoalTest goal_test{inst.kind == Kind::Labeled,
                       canonical_key(inst.goal, inst.geometry, inst.n),
                       {},
                       &codec};
    if (inst.kind == Kind::ColumnLabeled) {
        goal_test.goal_stack.assign(inst.n + 1, 0);
        for (int s = 1; s <= inst.goal.num_stacks(); ++s)
            for (ObjectId o : inst.goal.stack(s)) goal_test.goal_stack[o] = s;
    }
    if (goal_test(root)) return done(SolveStatus::Solved);

    Side side(inst.geometry, inst.n, inst.kind, inst.goal, cfg.heuristic,
              cfg.weight, root);
    while (NodeRec* cur = side.pop()) {
        if (goal_test(*cur->key)) return done(SolveStatus::Solved, path_from_root(cur));
        ++stats.expansions;
        if (stats.expansions % static_cast<unsigned>(cfg.expansion_check_interval) == 0 &&
            deadline.expired()) {
            stats.peak_closed = side.closed_count();
            return done(SolveStatus::Timeout);
        }
        for_each_successor(*cur->key, [&](Action a, const std::string& key) {
            side.relax(key, cur->g + 1, cur, a);
            return false;
        });
        stats.peak_open = std::max(stats.peak_open,
                                   static_cast<std::uint64_t>(side.open_size()));
        stats.peak_closed = side.closed_count();
    }
    return done(SolveStatus::Unsolvable);
}

SolveOutcome Searcher::run_bfs() {
    const std::string root = canonical_key(inst.start, inst.geometry, inst.n);
    GoalTest goal_test{inst.kind == Kind::Labeled,
                       canonical_key(inst.goal, inst.geometry, inst.n),
                       {},
                       &codec};
    if (inst.kind == Kind::ColumnLabeled) {
        goal_test.goal_stack.assign(inst.n + 1, 0);
        for (int s = 1; s <= inst.goal.num_stacks(); ++s)
            for (ObjectId o : inst.goal.stack(s)) goal_test.goal_stack[o] = s;
    }
    if (goal_test(root)) return done(SolveStatus::Solved);

    std::unordered_map<std::string, NodeRec> table;
    std::queue<NodeRec*> fifo;
    auto intern = [&](const std::string& key) -> NodeRec* {
        auto [it, inserted] = table.try_emplace(key);
        if (!inserted) return nullptr;
        it->second.key = &it->first;
        return &it->second;
    };
    NodeRec* root_rec = intern(root);
    fifo.push(root_rec);

    while (!fifo.empty()) {
        NodeRec* cur = fifo.front();
        fifo.pop();
        ++stats.expansions;
        if (stats.expansions % static_cast<unsigned>(cfg.expansion_check_interval) == 0 &&
            deadline.expired())
            return done(SolveStatus::Timeout);
        std::vector<Action> found;
        bool hit = for_each_successor(*cur->key, [&](Action a, const std::string& key) {
            NodeRec* next = intern(key);
            if (next == nullptr) return false;
            next->g = cur->g + 1;
            next->parent = cur;
            next->act = a;
            if (goal_test(key)) {
                found = path_from_root(next);
                return true;
            }
            fifo.push(next);
            return false;
        });
        stats.peak_open =
            std::max(stats.peak_open, static_cast<std::uint64_t>(fifo.size()));
        stats.peak_closed = stats.expansions;
        if (hit) return done(SolveStatus::Solved, std::move(found));
    }
    return done(SolveStatus::Unsolvable);
}

SolveOutcome Searcher::run_bibfs() {
    const std::string root_f = canonical_key(inst.start, inst.geometry, inst.n);
    const std::string root_b = canonical_key(inst.goal, inst.geometry, inst.n);
    if (root_f == root_b) return done(SolveStatus::Solved);

    std::unordered_map<std::string, NodeRec> table[2];
    std::queue<NodeRec*> fifo[2];
    for (int dir = 0; dir < 2; ++dir) {
        const std::string& root = dir == 0 ? root_f : root_b;
        auto [it, inserted] = table[dir].try_emplace(root);
        it->second.key = &it->first;
        fifo[dir].push(&it->second);
    }

    long long mu = -1;
    const NodeRec* meet_f = nullptr;
    const NodeRec* meet_b = nullptr;

    while (!fifo[0].empty() && !fifo[1].empty()) {
        // The cheapest conceivable undiscovered path pairs the two frontier
        // depths; once mu is at or below that, it is optimal.
        if (mu >= 0 &&
            mu <= fifo[0].front()->g + fifo[1].front()->g) break;
        int dir = fifo[0].size() <= fifo[1].size() ? 0 : 1;
        NodeRec* cur = fifo[dir].front();
        fifo[dir].pop();
        ++stats.expansions;
        if (stats.expansions % static_cast<unsigned>(cfg.expansion_check_interval) == 0 &&
            deadline.expired())
            return done(SolveStatus::Timeout);
        for_each_successor(*cur->key, [&](Action a, const std::string& key) {
            auto [it, inserted] = table[dir].try_emplace(key);
            NodeRec& next = it->second;
            if (!inserted) return false;
            next.key = &it->first;
            next.g = cur->g + 1;
            next.parent = cur;
            next.act = a;
            auto other = table[1 - dir].find(key);
            if (other != table[1 - dir].end()) {
                long long cand = static_cast<long long>(next.g) + other->second.g;
                if (mu < 0 || cand < mu) {
                    mu = cand;
                    meet_f = dir == 0 ? &next : &other->second;
                    meet_b = dir == 0 ? &other->second : &next;
                }
            }
            fifo[dir].push(&next);
            return false;
        });
        stats.peak_open = std::max(
            stats.peak_open,
            static_cast<std::uint64_t>(fifo[0].size() + fifo[1].size()));
        stats.peak_closed = stats.expansions;
    }

    stats.mu = mu;
    stats.f_forward = fifo[0].empty() ? -1 : fifo[0].front()->g;
    stats.f_backward = fifo[1].empty() ? -1 : fifo[1].front()->g;
    if (mu < 0) return done(SolveStatus::Unsolvable);
    std::vector<Action> acts = path_from_root(meet_f);
    append_inverted(acts, meet_b);
    return done(SolveStatus::Solved, std::move(acts));
}

SolveOutcome Searcher::run_bhpa() {
    const std::string root_f = canonical_key(inst.start, inst.geometry, inst.n);
    const std::string root_b = canonical_key(inst.goal, inst.geometry, inst.n);
    if (root_f == root_b) return done(SolveStatus::Solved);

    Side forward(inst.geometry, inst.n, inst.kind, inst.goal, cfg.heuristic,
                 cfg.weight, root_f);
    Side backward(inst.geometry, inst.n, inst.kind, inst.start, cfg.heuristic,
                  cfg.weight, root_b);
    Side* sides[2] = {&forward, &backward};

    long long mu = -1;
    std::string meet_key;

    auto note_meet = [&](const std::string& key, int g_here, const Side& other) {
        const NodeRec* rec = other.lookup(key);
        if (rec == nullptr) return;
        long long cand = static_cast<long long>(g_here) + rec->g;
        if (mu < 0 || cand < mu) {
            mu = cand;
            meet_key = key;
        }
    };

    while (true) {
        double f_i = forward.min_f();
        double f_g = backward.min_f();
        stats.f_forward = f_i == kInf ? -1 : static_cast<long long>(f_i);
        stats.f_backward = f_g == kInf ? -1 : static_cast<long long>(f_g);
        if (mu >= 0 && static_cast<double>(mu) <= std::max(f_i, f_g)) break;
        if (f_i == kInf && f_g == kInf) break;

        int dir;
        if (f_i == kInf)
            dir = 1;
        else if (f_g == kInf)
            dir = 0;
        else
            dir = forward.open_size() <= backward.open_size() ? 0 : 1;
        Side& side = *sides[dir];
        Side& other = *sides[1 - dir];
        NodeRec* cur = side.pop();
        if (cur == nullptr) continue;
        ++stats.expansions;
        if (stats.expansions % static_cast<unsigned>(cfg.expansion_check_interval) == 0 &&
            deadline.expired()) {
            stats.peak_closed = forward.closed_count() + backward.closed_count();
            return done(SolveStatus::Timeout);
        }
        for_each_successor(*cur->key, [&](Action a, const std::string& key) {
            NodeRec* next = side.relax(key, cur->g + 1, cur, a);
            if (next != nullptr) note_meet(key, next->g, other);
            return false;
        });
        stats.peak_open =
            std::max(stats.peak_open, static_cast<std::uint64_t>(
                                          forward.open_size() + backward.open_size()));
        stats.peak_closed = forward.closed_count() + backward.closed_count();
    }

    stats.mu = mu;
    if (mu < 0) return done(SolveStatus::Unsolvable);
    const NodeRec* mf = forward.lookup(meet_key);
    const NodeRec* mb = backward.lookup(meet_key);
    std::vector<Action> acts = path_from_root(mf);
    append_inverted(acts, mb);
    return done(SolveStatus::Solved, std::move(acts));
}

}  // namespace

SolveOutcome solve(const Instance& inst, const SearchConfig& cfg) {
    validate_instance(inst);
    if (cfg.weight < 1.0)
        throw std::invalid_argument("search: weight must be >= 1");
    if (cfg.expansion_check_interval < 1)
        throw std::invalid_argument("search: expansion_check_interval must be >= 1");
    const bool column = inst.kind == Kind::ColumnLabeled;
    if (column && (cfg.algorithm == Algorithm::BiBFS || cfg.algorithm == Algorithm::BHPA))
        throw std::invalid_argument(
            "search: backward search needs a unique goal state; use bfs or astar "
            "for column-labeled instances");
    const bool uses_heuristic =
        cfg.algorithm == Algorithm::AStar || cfg.algorithm == Algorithm::BHPA;
    if (column && uses_heuristic &&
        (cfg.heuristic == heuristics::HeuristicKind::DBH1 ||
         cfg.heuristic == heuristics::HeuristicKind::DBHn ||
         cfg.heuristic == heuristics::HeuristicKind::CBHplusDBH1))
        throw std::invalid_argument(
            "search: dbh-based heuristics need goal depths; use cbh or zero for "
            "column-labeled instances");

    Searcher s(inst, cfg);
    switch (cfg.algorithm) {
        case Algorithm::AStar: return s.run_astar();
        case Algorithm::BFS: return s.run_bfs();
        case Algorithm::BiBFS: return s.run_bibfs();
        case Algorithm::BHPA: return s.run_bhpa();
    }
    throw std::logic_error("unreachable");
}

}  // namespace stackr::search
