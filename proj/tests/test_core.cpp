#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "stackr/io.hpp"

using namespace stackr;
using testutil::make_instance;
using testutil::random_instance;

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(validate_geometry(Geometry{2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(validate_geometry(Geometry{3, 0}), std::invalid_argument);
    CHECK_NOTHROW(validate_geometry(Geometry{3, 1}));
}

TEST_CASE("arrangement validation catches duplicates and overflow") {
    Geometry g{3, 2};
    CHECK_THROWS_AS(validate_arrangement(Arrangement({{1}, {1}, {}}), g, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_arrangement(Arrangement({{1, 2, 3}, {}, {}}), g, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_arrangement(Arrangement({{5}, {}, {}}), g, 2),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_arrangement(Arrangement({{1, 2}, {3}, {}}), g, 3));
}

TEST_CASE("is_permissible rules") {
    Geometry g{3, 2};
    Arrangement pi({{}, {4, 2}, {1}});
    CHECK_FALSE(is_permissible(Action{1, 2}, pi, g));  // pop from empty
    CHECK_FALSE(is_permissible(Action{3, 2}, pi, g));  // push to full
    CHECK(is_permissible(Action{2, 3}, pi, g));
    CHECK(is_permissible(Action{2, 1}, pi, g));
    CHECK_THROWS_AS(is_permissible(Action{0, 2}, pi, g), std::invalid_argument);
    CHECK_THROWS_AS(is_permissible(Action{1, 1}, pi, g), std::invalid_argument);
}

TEST_CASE("apply_action moves the accessible object and shifts the rest") {
    Geometry g{3, 2};
    Arrangement pi({{3}, {}, {}});
    Arrangement next = apply_action(Action{1, 2}, pi, g);
    CHECK(next.stack(1).empty());
    CHECK(next.stack(2) == std::vector<ObjectId>{3});
    CHECK(pi.stack(1) == std::vector<ObjectId>{3});  // value semantics

    Arrangement pi2({{3}, {4, 2}, {}});
    Arrangement next2 = apply_action(Action{2, 1}, pi2, g);
    CHECK(next2.stack(2) == std::vector<ObjectId>{2});
    CHECK(next2.stack(1) == std::vector<ObjectId>{4, 3});

    CHECK_THROWS_WITH_AS(apply_action(Action{1, 2}, Arrangement({{}, {1}, {}}), g),
                         doctest::Contains("source stack is empty"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        apply_action(Action{1, 2}, Arrangement({{3}, {4, 2}, {}}), g),
        doctest::Contains("at capacity"), std::invalid_argument);
}

TEST_CASE("apply then inverse restores the arrangement") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        Instance inst = random_instance(3, 3, 5, rng());
        Arrangement cur = inst.start;
        for (int step = 0; step < 20; ++step) {
            auto succ = search::expand(cur, inst.geometry);
            if (succ.empty()) break;
            const auto& [act, next] = succ[rng() % succ.size()];
            Action back{act.to_stack, act.from_stack};
            if (is_permissible(back, next, inst.geometry))
                CHECK(apply_action(back, next, inst.geometry) == cur);
            cur = next;
        }
    }
}

TEST_CASE("apply_action preserves the arrangement invariants") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 100; ++iter) {
        Instance inst = random_instance(4, 3, 8, rng());
        Arrangement cur = inst.start;
        for (int step = 0; step < 30; ++step) {
            auto succ = search::expand(cur, inst.geometry);
            if (succ.empty()) break;
            cur = succ[rng() % succ.size()].second;
            CHECK_NOTHROW(validate_arrangement(cur, inst.geometry, inst.n));
            CHECK(cur.object_count() == inst.n);
        }
    }
}

TEST_CASE("is_goal by kind") {
    Instance labeled = make_instance(3, 2, {{1, 2}, {}, {}}, {{1, 2}, {}, {}});
    CHECK(is_goal(labeled.goal, labeled));

    Instance column =
        make_instance(3, 2, {{2, 1}, {}, {}}, {{1, 2}, {}, {}}, Kind::ColumnLabeled);
    CHECK(is_goal(Arrangement({{2, 1}, {}, {}}), column));  // depth ignored
    Instance strict = make_instance(3, 2, {{2, 1}, {}, {}}, {{1, 2}, {}, {}});
    CHECK_FALSE(is_goal(Arrangement({{2, 1}, {}, {}}), strict));

    CHECK_THROWS_AS(is_goal(Arrangement({{1}, {}, {}}), labeled),
                    std::invalid_argument);
}

TEST_CASE("labeled goal satisfaction implies column goal satisfaction") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 100; ++iter) {
        Instance inst = random_instance(3, 3, 6, rng());
        Instance column = inst;
        column.kind = Kind::ColumnLabeled;
        CHECK(is_goal(inst.goal, inst));
        CHECK(is_goal(inst.goal, column));
    }
}

TEST_CASE("verify_solution") {
    Instance inst = make_instance(3, 2, {{1, 2}, {}, {}}, {{1, 2}, {}, {}});
    SUBCASE("empty solution on start == goal") {
        VerifyReport rep = verify_solution(inst, Solution{});
        CHECK(rep.ok);
        CHECK(rep.cost == 0);
    }
    SUBCASE("impermissible step is reported") {
        Solution sol;
        sol.actions = {Action{2, 3}};
        sol.cost = 1;
        VerifyReport rep = verify_solution(inst, sol);
        CHECK_FALSE(rep.ok);
        CHECK(rep.failed_step == 0);
        CHECK(rep.reason.find("empty") != std::string::npos);
    }
    SUBCASE("goal mismatch is reported") {
        Solution sol;
        sol.actions = {Action{1, 2}};
        sol.cost = 1;
        VerifyReport rep = verify_solution(inst, sol);
        CHECK_FALSE(rep.ok);
        CHECK(rep.failed_step == 1);
    }
    SUBCASE("declared cost must match") {
        Instance moved = make_instance(3, 2, {{1}, {}, {}}, {{}, {1}, {}});
        Solution sol;
        sol.actions = {Action{1, 2}};
        sol.cost = 5;
        CHECK_FALSE(verify_solution(moved, sol).ok);
    }
}

TEST_CASE("deleting one action from a valid solution breaks it") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int iter = 0; iter < 50 && checked < 30; ++iter) {
        Instance inst = random_instance(3, 2, 4, rng());
        search::SearchConfig cfg;
        cfg.algorithm = search::Algorithm::BFS;
        auto out = search::solve(inst, cfg);
        REQUIRE(out.status == search::SolveStatus::Solved);
        if (out.solution.cost < 2) continue;
        Solution broken = out.solution;
        broken.actions.erase(broken.actions.begin() +
                             static_cast<long>(rng() % broken.actions.size()));
        broken.cost = static_cast<int>(broken.actions.size());
        CHECK_FALSE(verify_solution(inst, broken).ok);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("canonical_key is injective and decodable") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 200; ++iter) {
        Instance inst = random_instance(4, 3, 7, rng());
        const Geometry& g = inst.geometry;
        std::string k1 = canonical_key(inst.start, g, inst.n);
        std::string k2 = canonical_key(inst.start, g, inst.n);
        CHECK(k1 == k2);
        CHECK(k1.size() == static_cast<size_t>(g.total_slots()));
        CHECK(decode_key(k1, g, inst.n) == inst.start);
        if (!(inst.start == inst.goal))
            CHECK(k1 != canonical_key(inst.goal, g, inst.n));
    }
}

TEST_CASE("canonical_key uses two-byte digits for large object counts") {
    Geometry g{3, 300};
    Arrangement a(3);
    for (int i = 1; i <= 300; ++i) a.mutable_stack(1).push_back(i);
    std::string key = canonical_key(a, g, 300);
    CHECK(key.size() == static_cast<size_t>(g.total_slots()) * 2);
    CHECK(decode_key(key, g, 300) == a);
}

TEST_CASE("instance json round trip") {
    std::mt19937_64 rng(29);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(3, 3, 6, rng(),
                                        iter % 2 ? Kind::ColumnLabeled : Kind::Labeled);
        Instance back = io::instance_from_json(io::instance_to_json(inst));
        CHECK(back.start == inst.start);
        CHECK(back.goal == inst.goal);
        CHECK(back.kind == inst.kind);
        CHECK(back.n == inst.n);
        CHECK(back.geometry == inst.geometry);
    }
}

TEST_CASE("instance json errors name the field") {
    CHECK_THROWS_WITH_AS(io::instance_from_json("{}"),
                         doctest::Contains("version"), std::invalid_argument);
    const char* wrong_stacks = R"({"version":1,"num_stacks":3,"depth":2,"n":1,
        "kind":"labeled","start":[[1],[]],"goal":[[1],[],[]]})";
    CHECK_THROWS_WITH_AS(io::instance_from_json(wrong_stacks),
                         doctest::Contains("start"), std::invalid_argument);
    const char* bad_kind = R"({"version":1,"num_stacks":3,"depth":2,"n":1,
        "kind":"x","start":[[1],[],[]],"goal":[[1],[],[]]})";
    CHECK_THROWS_WITH_AS(io::instance_from_json(bad_kind),
                         doctest::Contains("kind"), std::invalid_argument);
}

TEST_CASE("solution json round trip") {
    Solution sol;
    sol.actions = {Action{1, 2}, Action{2, 3}};
    sol.cost = 2;
    Solution back = io::solution_from_json(io::solution_to_json(sol));
    CHECK(back.cost == 2);
    CHECK(back.actions == sol.actions);
    CHECK_THROWS_WITH_AS(io::solution_from_json(R"({"cost":3,"actions":[[1,2]]})"),
                         doctest::Contains("cost"), std::invalid_argument);
}
