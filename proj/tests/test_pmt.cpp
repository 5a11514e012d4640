#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "stackr/pmt.hpp"
#include "stackr/poly.hpp"

using namespace stackr;
using testutil::make_instance;
using testutil::random_instance;

TEST_CASE("tree shape") {
    SUBCASE("three stacks of depth three") {
        pmt::PebbleTree tree(3, 3);
        CHECK(tree.vertex_count() == 10);
        CHECK(tree.edge_count() == 9);
    }
    SUBCASE("depth one gives a star") {
        pmt::PebbleTree tree(3, 1);
        CHECK(tree.vertex_count() == 4);
        for (int leaf = 1; leaf <= 3; ++leaf) CHECK(tree.parent(leaf) == 0);
    }
    SUBCASE("vertex count matches (w+1)d + 1 across geometries") {
        for (int w = 2; w <= 10; ++w)
            for (int d = 1; d <= 10; ++d) {
                pmt::PebbleTree tree(w + 1, d);
                CHECK(tree.vertex_count() == (w + 1) * d + 1);
                CHECK(tree.edge_count() == tree.vertex_count() - 1);
            }
    }
    SUBCASE("paths hang off the root, deeper vertices chain") {
        pmt::PebbleTree tree(4, 3);
        CHECK(tree.parent(tree.vertex_of(2, 1)) == tree.root());
        CHECK(tree.parent(tree.vertex_of(2, 3)) == tree.vertex_of(2, 2));
        CHECK(tree.adjacent(tree.root(), tree.vertex_of(4, 1)));
        CHECK_FALSE(tree.adjacent(tree.vertex_of(1, 1), tree.vertex_of(2, 1)));
        CHECK(tree.slot_of(tree.vertex_of(3, 2)) == std::pair<int, int>{3, 2});
    }
    SUBCASE("edge dump lists every parent link") {
        pmt::PebbleTree tree(3, 1);
        CHECK(tree.dump_edges() == "0 1\n0 2\n0 3\n");
    }
}

TEST_CASE("reduce maps slots to path vertices") {
    Instance inst =
        make_instance(3, 3, {{1, 2, 3}, {4, 5}, {}}, {{4, 5}, {1, 2, 3}, {}});
    pmt::Reduction red = pmt::reduce(inst);
    CHECK(red.tree.vertex_count() == 10);
    CHECK(red.start[1] == red.tree.vertex_of(1, 1));
    CHECK(red.start[2] == red.tree.vertex_of(1, 2));
    CHECK(red.start[3] == red.tree.vertex_of(1, 3));
    CHECK(red.start[4] == red.tree.vertex_of(2, 1));
    CHECK(red.goal[1] == red.tree.vertex_of(2, 1));

    Instance column = inst;
    column.kind = Kind::ColumnLabeled;
    CHECK_THROWS_AS(pmt::reduce(column), std::invalid_argument);
}

TEST_CASE("one action on a depth-1 board expands to a two-move walk") {
    Instance inst = make_instance(3, 1, {{1}, {}, {}}, {{}, {1}, {}});
    Solution sol;
    sol.actions = {Action{1, 2}};
    sol.cost = 1;
    auto moves = pmt::actions_to_pebble_moves(inst, sol);
    pmt::PebbleTree tree(3, 1);
    REQUIRE(moves.size() == 2);
    CHECK(moves[0] == pmt::PebbleMove{1, tree.vertex_of(1, 1), tree.root()});
    CHECK(moves[1] == pmt::PebbleMove{1, tree.root(), tree.vertex_of(2, 1)});

    Solution back = pmt::pebble_moves_to_actions(inst, moves);
    CHECK(back.actions == sol.actions);
}

TEST_CASE("empty solution round trips to nothing") {
    Instance inst = make_instance(3, 2, {{1}, {}, {}}, {{1}, {}, {}});
    auto moves = pmt::actions_to_pebble_moves(inst, Solution{});
    CHECK(moves.empty());
    CHECK(pmt::pebble_moves_to_actions(inst, moves).cost == 0);
}

TEST_CASE("invalid inputs are rejected") {
    Instance inst = make_instance(3, 1, {{1}, {}, {}}, {{}, {1}, {}});
    pmt::PebbleTree tree(3, 1);

    SUBCASE("unverified solution") {
        Solution bad;
        bad.actions = {Action{2, 3}};
        bad.cost = 1;
        CHECK_THROWS_AS(pmt::actions_to_pebble_moves(inst, bad),
                        std::invalid_argument);
    }
    SUBCASE("stranding a pebble on the root") {
        std::vector<pmt::PebbleMove> moves = {
            {1, tree.vertex_of(1, 1), tree.root()}};
        CHECK_THROWS_WITH_AS(pmt::pebble_moves_to_actions(inst, moves),
                             doctest::Contains("stranded"), std::invalid_argument);
    }
    SUBCASE("moving to an occupied vertex names the move index") {
        Instance two = make_instance(3, 1, {{1}, {2}, {}}, {{2}, {1}, {}});
        pmt::PebbleTree t2(3, 1);
        std::vector<pmt::PebbleMove> moves = {
            {1, t2.vertex_of(1, 1), t2.root()},
            {2, t2.vertex_of(2, 1), t2.root()}};
        CHECK_THROWS_WITH_AS(pmt::pebble_moves_to_actions(two, moves),
                             doctest::Contains("move 1"), std::invalid_argument);
    }
    SUBCASE("non-adjacent move") {
        std::vector<pmt::PebbleMove> moves = {
            {1, tree.vertex_of(1, 1), tree.vertex_of(2, 1)}};
        CHECK_THROWS_WITH_AS(pmt::pebble_moves_to_actions(inst, moves),
                             doctest::Contains("not adjacent"),
                             std::invalid_argument);
    }
    SUBCASE("a root traversal back to the same stack is not a pop-and-push") {
        Instance deep = make_instance(3, 2, {{1, 2}, {}, {}}, {{1, 2}, {}, {}});
        pmt::PebbleTree t3(3, 2);
        std::vector<pmt::PebbleMove> moves = {
            {1, t3.vertex_of(1, 1), t3.root()},
            {1, t3.root(), t3.vertex_of(1, 1)}};
        CHECK_THROWS_WITH_AS(pmt::pebble_moves_to_actions(deep, moves),
                             doctest::Contains("returns to stack"),
                             std::invalid_argument);
    }
}

TEST_CASE("round trip over solved random instances") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 60; ++iter) {
        const int w = 2 + static_cast<int>(rng() % 4);
        const int d = 1 + static_cast<int>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % (w * d));
        Instance inst = random_instance(w, d, n, rng());
        Solution sol = poly::poly_d_solve(inst);
        REQUIRE(verify_solution(inst, sol).ok);

        auto moves = pmt::actions_to_pebble_moves(inst, sol);
        pmt::Reduction red = pmt::reduce(inst);
        CHECK_NOTHROW(pmt::check_execution(red.tree, red.start, moves));

        Solution back = pmt::pebble_moves_to_actions(inst, moves);
        CHECK(back.actions == sol.actions);
        CHECK(back.cost == sol.cost);
    }
}

TEST_CASE("expanded executions end in the goal configuration") {
    std::mt19937_64 rng(37);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(3, 3, 6, rng());
        Solution sol = poly::poly_d_solve(inst);
        auto moves = pmt::actions_to_pebble_moves(inst, sol);
        pmt::Reduction red = pmt::reduce(inst);
        pmt::PebbleConfiguration cur = red.start;
        for (const auto& m : moves) cur[m.pebble] = m.to_vertex;
        CHECK(cur == red.goal);
    }
}
