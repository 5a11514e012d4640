#pragma once

#include <string>
#include <vector>

#include "stackr/bench.hpp"
#include "stackr/core.hpp"
#include "stackr/search.hpp"

namespace testutil {

using namespace stackr;

// Builds an instance from top-first stack contents; n inferred.
inline Instance make_instance(int num_stacks, int depth,
                              std::vector<std::vector<ObjectId>> start,
                              std::vector<std::vector<ObjectId>> goal,
                              Kind kind = Kind::Labeled) {
    Instance inst;
    inst.geometry = Geometry{num_stacks, depth};
    inst.start = Arrangement(std::move(start));
    inst.goal = Arrangement(std::move(goal));
    inst.n = inst.start.object_count();
    inst.kind = kind;
    return inst;
}

inline Instance random_instance(int w, int d, int n, std::uint64_t seed,
                                Kind kind = Kind::Labeled) {
    bench::Setup setup;
    setup.w = w;
    setup.d = d;
    setup.n = n;
    return bench::generate_instance(setup, seed, kind);
}

inline Arrangement replay(const Instance& inst, const std::vector<Action>& acts,
                          size_t count) {
    Arrangement cur = inst.start;
    for (size_t i = 0; i < count && i < acts.size(); ++i)
        cur = apply_action(acts[i], cur, inst.geometry);
    return cur;
}

inline int bfs_optimal(const Instance& inst, long long timeout_ms = 60000) {
    search::SearchConfig cfg;
    cfg.algorithm = search::Algorithm::BFS;
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    search::SolveOutcome out = search::solve(inst, cfg);
    return out.status == search::SolveStatus::Solved ? out.solution.cost : -1;
}

}  // namespace testutil
