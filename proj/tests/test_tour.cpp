#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rhga/tour.hpp"
#include "support.hpp"

using namespace rhga;

TEST_CASE("tour length on the square") {
    const Instance unit = test::square(1.0);
    CHECK(tour_length(unit, std::vector<int>{0, 1, 2, 3}) == 4);
    // Crossing order: rounding collapses the diagonal to 1.
    CHECK(tour_length(unit, std::vector<int>{0, 2, 1, 3}) == 4);
    const Instance big = test::square();
    CHECK(tour_length(big, std::vector<int>{0, 1, 2, 3}) == 4000);
    CHECK(tour_length(big, std::vector<int>{0, 2, 1, 3}) == 4828);
}

TEST_CASE("validate_tour") {
    CHECK_FALSE(validate_tour(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 1, 2, 3}, 4));

    const auto dup = validate_tour(std::vector<int>{0, 1, 1, 3}, std::vector<int>{0, 1, 2, 3}, 4);
    REQUIRE(dup);
    CHECK(dup->kind == TourViolation::Kind::DuplicateCity);
    CHECK(dup->city == 1);

    const Instance sq = test::square();
    Tour t(sq, {0, 1, 2, 3});
    CHECK_FALSE(validate_tour(t, 4));
    t.mutable_positions()[2] = 0;
    const auto bad = validate_tour(t, 4);
    REQUIRE(bad);
    CHECK(bad->kind == TourViolation::Kind::PosMismatch);

    const auto small = validate_tour(std::vector<int>{0, 1, 2}, std::vector<int>{0, 1, 2}, 4);
    REQUIRE(small);
    CHECK(small->kind == TourViolation::Kind::WrongSize);
}

TEST_CASE("neighbors") {
    const Instance sq = test::square();
    Tour t(sq, {0, 1, 2, 3});
    CHECK(neighbors(t, 0) == std::pair{3, 1});
    CHECK(neighbors(t, 2) == std::pair{1, 3});
    t.reverse_path(1, 2);
    CHECK(std::vector<int>(t.order().begin(), t.order().end()) == std::vector<int>{0, 2, 1, 3});
    CHECK(neighbors(t, 1) == std::pair{2, 3});
}

TEST_CASE("reverse_path keeps the tour valid and the length recomputable") {
    const Instance inst = test::random_euc(60, 1);
    Rng rng(5);
    Tour t = test::random_tour(inst, rng);
    for (int s = 0; s < 2000; ++s) {
        const int i = rand_below(rng, inst.size());
        const int j = rand_below(rng, inst.size());
        // A 2-opt move: reversing positions i+1..j replaces two edges.
        const int a = t.at(i), b = t.at((i + 1) % inst.size());
        const int c = t.at(j), d = t.at((j + 1) % inst.size());
        if (a == c || b == c || a == d) continue;
        const Length delta = inst.distance(a, c) + inst.distance(b, d) - inst.distance(a, b) - inst.distance(c, d);
        t.reverse_path((i + 1) % inst.size(), j);
        t.set_length(t.length() + delta);
        REQUIRE_FALSE(validate_tour(t, inst.size()));
        REQUIRE(tour_length(inst, t.order()) == t.length());
    }
}

TEST_CASE("greedy 2-opt on the square gives the hull") {
    const Instance sq = test::square(1.0);
    const auto nn = nearest_neighbors(sq, 3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const Tour t = greedy_2opt_init(sq, nn, rng);
        CHECK(t.length() == 4);
        CHECK_FALSE(validate_tour(t, 4));
    }
}

TEST_CASE("2-opt descent never lengthens") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Instance inst = test::random_euc(8, seed);
        const auto nn = nearest_neighbors(inst, 7);
        Rng rng(seed);
        Tour t = test::random_tour(inst, rng);
        const Length before = t.length();
        two_opt_descent(inst, nn, t, rng);
        CHECK(t.length() <= before);
        CHECK(t.length() == tour_length(inst, t.order()));
        CHECK_FALSE(validate_tour(t, inst.size()));
    }
}

TEST_CASE("initial tours differ across seeds") {
    const Instance inst = test::random_euc(50, 9);
    const auto nn = nearest_neighbors(inst, 10);
    std::set<std::vector<int>> seen;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const Tour t = greedy_2opt_init(inst, nn, rng);
        seen.insert(canonical_order(t.order()));
    }
    CHECK(seen.size() >= 2);
}

TEST_CASE("canonical order ignores rotation and direction") {
    const std::vector<int> a{2, 3, 4, 0, 1};
    const std::vector<int> b{1, 0, 4, 3, 2};
    CHECK(canonical_order(a) == canonical_order(b));
    CHECK(canonical_order(a) == std::vector<int>{0, 1, 2, 3, 4});
}
