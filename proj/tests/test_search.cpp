#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace stackr;
using namespace stackr::search;
using testutil::make_instance;
using testutil::random_instance;

namespace {

SolveOutcome run(const Instance& inst, Algorithm algo,
                 heuristics::HeuristicKind h = heuristics::HeuristicKind::CBH,
                 double weight = 1.0, long long timeout_ms = 60000) {
    SearchConfig cfg;
    cfg.algorithm = algo;
    cfg.heuristic = h;
    cfg.weight = weight;
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    return solve(inst, cfg);
}

}  // namespace

TEST_CASE("expand enumerates permissible successors in order") {
    SUBCASE("one object anywhere has w destinations") {
        Geometry g{4, 2};
        Arrangement a({{}, {7}, {}, {}});
        auto succ = expand(a, g);
        REQUIRE(succ.size() == 3);
        CHECK(succ[0].first == Action{2, 1});
        CHECK(succ[1].first == Action{2, 3});
        CHECK(succ[2].first == Action{2, 4});
    }
    SUBCASE("two objects stacked together, two free stacks") {
        Geometry g{3, 2};
        Arrangement a({{1, 2}, {}, {}});
        auto succ = expand(a, g);
        CHECK(succ.size() == 2);
    }
    SUBCASE("branching factor never exceeds (w+1)w") {
        std::mt19937_64 rng(67);
        for (int iter = 0; iter < 100; ++iter) {
            Instance inst = random_instance(3, 3, 7, rng());
            const int w1 = inst.geometry.num_stacks;
            auto succ = expand(inst.start, inst.geometry);
            CHECK(succ.size() <= static_cast<size_t>(w1 * (w1 - 1)));
            for (const auto& [act, next] : succ)
                CHECK(is_permissible(act, inst.start, inst.geometry));
        }
    }
}

TEST_CASE("trivial solves") {
    Instance same = make_instance(3, 2, {{1, 2}, {}, {}}, {{1, 2}, {}, {}});
    for (Algorithm a :
         {Algorithm::BFS, Algorithm::BiBFS, Algorithm::AStar, Algorithm::BHPA}) {
        auto out = run(same, a);
        CHECK(out.status == SolveStatus::Solved);
        CHECK(out.solution.cost == 0);
        CHECK(out.stats.expansions == 0);
    }

    Instance one_move = make_instance(3, 2, {{1}, {}, {}}, {{}, {1}, {}});
    for (Algorithm a :
         {Algorithm::BFS, Algorithm::BiBFS, Algorithm::AStar, Algorithm::BHPA}) {
        auto out = run(one_move, a);
        CHECK(out.status == SolveStatus::Solved);
        CHECK(out.solution.cost == 1);
    }
}

TEST_CASE("optimal algorithms agree on random instances") {
    std::mt19937_64 rng(71);
    const int setups[][3] = {{2, 2, 4}, {2, 3, 6}, {3, 2, 6}};
    for (const auto& s : setups) {
        for (int iter = 0; iter < 25; ++iter) {
            Instance inst = random_instance(s[0], s[1], s[2], rng());
            auto bfs = run(inst, Algorithm::BFS);
            auto bibfs = run(inst, Algorithm::BiBFS);
            auto astar_cbh = run(inst, Algorithm::AStar);
            auto astar_dbh1 =
                run(inst, Algorithm::AStar, heuristics::HeuristicKind::DBH1);
            auto bhpa = run(inst, Algorithm::BHPA);
            REQUIRE(bfs.status == SolveStatus::Solved);
            CHECK(bibfs.solution.cost == bfs.solution.cost);
            CHECK(astar_cbh.solution.cost == bfs.solution.cost);
            CHECK(astar_dbh1.solution.cost == bfs.solution.cost);
            CHECK(bhpa.solution.cost == bfs.solution.cost);
        }
    }
}

TEST_CASE("inadmissible dbhn still returns verified solutions") {
    std::mt19937_64 rng(73);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(2, 3, 5, rng());
        auto out = run(inst, Algorithm::AStar, heuristics::HeuristicKind::DBHn);
        CHECK(out.status == SolveStatus::Solved);
        CHECK(verify_solution(inst, out.solution).ok);
    }
}

TEST_CASE("weighted search is within the weight factor of optimal") {
    std::mt19937_64 rng(79);
    for (int iter = 0; iter < 30; ++iter) {
        Instance inst = random_instance(3, 3, 7, rng());
        const int opt = run(inst, Algorithm::AStar).solution.cost;
        auto wa = run(inst, Algorithm::AStar, heuristics::HeuristicKind::CBH, 2.0);
        auto wb = run(inst, Algorithm::BHPA, heuristics::HeuristicKind::CBH, 2.0);
        REQUIRE(wa.status == SolveStatus::Solved);
        REQUIRE(wb.status == SolveStatus::Solved);
        CHECK(wa.solution.cost <= 2 * opt);
        CHECK(wb.solution.cost <= 2 * opt);
        CHECK(wa.solution.cost >= opt);
        CHECK(wb.solution.cost >= opt);
    }
}

TEST_CASE("returned solutions replay to the goal") {
    std::mt19937_64 rng(83);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(3, 2, 5, rng());
        for (Algorithm a : {Algorithm::BFS, Algorithm::BiBFS, Algorithm::AStar,
                            Algorithm::BHPA}) {
            auto out = run(inst, a);
            REQUIRE(out.status == SolveStatus::Solved);
            CHECK(verify_solution(inst, out.solution).ok);
        }
    }
}

TEST_CASE("determinism: identical runs give identical solutions") {
    std::mt19937_64 rng(89);
    for (int iter = 0; iter < 10; ++iter) {
        Instance inst = random_instance(3, 3, 6, rng());
        for (Algorithm a : {Algorithm::BFS, Algorithm::BiBFS, Algorithm::AStar,
                            Algorithm::BHPA}) {
            auto first = run(inst, a);
            auto second = run(inst, a);
            CHECK(first.solution.actions == second.solution.actions);
            CHECK(first.stats.expansions == second.stats.expansions);
        }
    }
}

TEST_CASE("timeout reports partial stats") {
    Instance inst = random_instance(5, 5, 20, 12345);
    auto out = run(inst, Algorithm::BFS, heuristics::HeuristicKind::Zero, 1.0, 30);
    CHECK(out.status == SolveStatus::Timeout);
    CHECK(out.stats.expansions > 0);
    CHECK(out.stats.elapsed_ms >= 25.0);
}

TEST_CASE("column-labeled searches") {
    std::mt19937_64 rng(97);
    SUBCASE("forward algorithms solve membership goals optimally") {
        for (int iter = 0; iter < 25; ++iter) {
            Instance inst = random_instance(3, 2, 4, rng(), Kind::ColumnLabeled);
            auto bfs = run(inst, Algorithm::BFS);
            auto astar = run(inst, Algorithm::AStar);
            REQUIRE(bfs.status == SolveStatus::Solved);
            REQUIRE(astar.status == SolveStatus::Solved);
            CHECK(astar.solution.cost == bfs.solution.cost);
            CHECK(verify_solution(inst, astar.solution).ok);
            Instance labeled = inst;
            labeled.kind = Kind::Labeled;
            // Relaxed goals can only get cheaper.
            CHECK(bfs.solution.cost <= run(labeled, Algorithm::BFS).solution.cost);
        }
    }
    SUBCASE("backward algorithms and dbh heuristics are rejected") {
        Instance inst = random_instance(3, 2, 4, 4242, Kind::ColumnLabeled);
        CHECK_THROWS_AS(run(inst, Algorithm::BiBFS), std::invalid_argument);
        CHECK_THROWS_AS(run(inst, Algorithm::BHPA), std::invalid_argument);
        CHECK_THROWS_AS(run(inst, Algorithm::AStar, heuristics::HeuristicKind::DBH1),
                        std::invalid_argument);
        CHECK_NOTHROW(run(inst, Algorithm::AStar, heuristics::HeuristicKind::Zero));
    }
}

TEST_CASE("config validation") {
    Instance inst = make_instance(3, 2, {{1}, {}, {}}, {{}, {1}, {}});
    SearchConfig cfg;
    cfg.weight = 0.5;
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
    cfg.weight = 1.0;
    cfg.expansion_check_interval = 0;
    CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
}

TEST_CASE("stats counters are populated") {
    Instance inst = random_instance(3, 3, 6, 31337);
    auto astar = run(inst, Algorithm::AStar);
    CHECK(astar.stats.generations >= astar.stats.expansions);
    CHECK(astar.stats.peak_closed > 0);
    auto bhpa = run(inst, Algorithm::BHPA);
    CHECK(bhpa.stats.mu == bhpa.solution.cost);
    auto bibfs = run(inst, Algorithm::BiBFS);
    CHECK(bibfs.stats.mu == bibfs.solution.cost);
}
