#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stackr/core.hpp"
#include "stackr/heuristics.hpp"

// Random instance generation, experiment matrix execution and aggregation.
//
// Instances are drawn uniformly over all arrangements that keep the buffer
// stack empty: stack occupancy counts are sampled from the exact composition
// distribution (every composition carries the same number of arrangements),
// then a random permutation fills the occupied slots. All randomness flows
// from explicit 64-bit seeds; a master seed splits into per-instance seeds by
// a counter-based mix, so every cell is independently reproducible.

namespace stackr::bench {

struct Setup {
    int w = 0;  // working stacks; the board has w+1 stacks in total
    int d = 0;
    int n = 0;
    int instance_count = 100;
    std::uint64_t seed = 0;
};

// An algorithm column of the experiment matrix. `algo` is one of bfs, bibfs,
// astar, bhpa, polyd, polylsr; heuristic/weight apply to astar and bhpa.
struct AlgoSpec {
    std::string algo = "astar";
    heuristics::HeuristicKind heuristic = heuristics::HeuristicKind::CBH;
    double weight = 1.0;

    std::string label() const;
};

struct InstanceResult {
    int setup_index = 0;
    int instance_index = 0;
    std::uint64_t instance_seed = 0;
    int spec_index = 0;
    bool solved = false;
    int cost = -1;
    std::uint64_t expansions = 0;
    double elapsed_ms = 0.0;
};

struct CellStats {
    int setup_index = 0;
    int spec_index = 0;
    int solved_count = 0;
    int total = 0;
    double success_rate = 0.0;       // percent
    std::optional<double> avg_cost;  // over solved instances only
    double mean_expansions = 0.0;
    double mean_elapsed_ms = 0.0;
    bool unstable = false;  // some run finished within 10% of the timeout
};

struct BenchReport {
    std::vector<Setup> setups;
    std::vector<AlgoSpec> specs;
    std::vector<InstanceResult> rows;
    std::vector<CellStats> cells;
    double timeout_ms = 0.0;
};

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter);

Instance generate_instance(const Setup& setup, std::uint64_t seed,
                           Kind kind = Kind::Labeled);

// Lower bound on the worst-case optimal action count over all n = wd
// instances: each action reaches at most w(w+1) new configurations, so
// covering (wd)! goals needs at least log((wd)!)/log(w(w+1)) actions.
long long counting_lower_bound(int w, int d);

int default_threads();

// Runs fn(0..count-1) on `threads` workers; order is unspecified but the
// written results are keyed by index, so aggregation is deterministic.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

BenchReport run_matrix(const std::vector<Setup>& setups,
                       const std::vector<AlgoSpec>& specs,
                       std::chrono::milliseconds timeout, int threads);

std::string instances_csv(const BenchReport& report);
std::string aggregate_csv(const BenchReport& report);
std::string aggregate_text(const BenchReport& report);

// Success-rate curves, one file body per spec: "n success_rate" pairs in
// setup order, gnuplot-ready.
std::vector<std::pair<std::string, std::string>> plot_series(
    const BenchReport& report);

}  // namespace stackr::bench
