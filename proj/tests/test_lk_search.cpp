#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "rhga/lk_search.hpp"
#include "rhga/oracle.hpp"
#include "support.hpp"

using namespace rhga;

namespace {

using EdgeSet = std::multiset<std::pair<int, int>>;

std::pair<int, int> edge(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

EdgeSet tour_edges(std::span<const int> order) {
    EdgeSet s;
    for (std::size_t k = 0; k < order.size(); ++k) s.insert(edge(order[k], order[(k + 1) % order.size()]));
    return s;
}

// Removes and adds the move's edges explicitly; nullopt when the result is not one cycle.
std::optional<EdgeSet> apply_by_hand(const Tour& t, const std::vector<int>& p) {
    EdgeSet s = tour_edges(t.order());
    const std::size_t m = p.size() / 2;
    for (std::size_t j = 0; j < m; ++j) {
        const auto it = s.find(edge(p[2 * j], p[2 * j + 1]));
        if (it == s.end()) return std::nullopt;
        s.erase(it);
    }
    for (std::size_t j = 0; j < m; ++j) s.insert(edge(p[2 * j + 1], p[(2 * j + 2) % p.size()]));
    const int n = t.size();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [a, b] : s) {
        if (a == b) return std::nullopt;
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (const auto& a : adj)
        if (a.size() != 2) return std::nullopt;
    int prev = -1, cur = 0, seen = 0;
    do {
        const auto& a = adj[static_cast<std::size_t>(cur)];
        const int nxt = a[0] != prev ? a[0] : a[1];
        prev = cur;
        cur = nxt;
        ++seen;
    } while (cur != 0 && seen <= n);
    if (seen != n) return std::nullopt;
    return s;
}

void check_episode(const Instance& inst, const Tour& before, const KOptEpisode& ep, int k_max) {
    const auto& p = ep.path;
    REQUIRE(p.size() % 2 == 0);
    const std::size_t m = p.size() / 2;
    CHECK(m >= 2);
    CHECK(static_cast<int>(m) <= k_max);
    Length g = 0;
    for (std::size_t j = 0; j < m; ++j) {
        CHECK(before.has_edge(p[2 * j], p[2 * j + 1]));
        g += inst.distance(p[2 * j], p[2 * j + 1]);
        if (j + 1 < m) {
            g -= inst.distance(p[2 * j + 1], p[2 * j + 2]);
            CHECK(g > 0);  // positive partial gain
        }
    }
    CHECK(g - inst.distance(p.back(), p.front()) == ep.gain);
}

}  // namespace

TEST_CASE("closure test against explicit edge surgery") {
    Rng rng(3);
    int feasible = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const int n = 6 + rand_below(rng, 10);
        const Instance inst = test::random_euc(n, static_cast<std::uint64_t>(trial % 50));
        const Tour t = test::random_tour(inst, rng);
        const int m = 2 + rand_below(rng, 4);
        std::vector<int> p;
        int cur = rand_below(rng, n);
        for (int j = 0; j < m; ++j) {
            p.push_back(cur);
            const int nb = rng() & 1 ? t.next(cur) : t.prev(cur);
            p.push_back(nb);
            cur = rand_below(rng, n);
        }
        const auto hand = apply_by_hand(t, p);
        std::set<std::pair<int, int>> removed;
        bool distinct = true;
        for (int j = 0; j < m; ++j) distinct &= removed.insert(edge(p[static_cast<std::size_t>(2 * j)], p[static_cast<std::size_t>(2 * j + 1)])).second;
        if (!distinct) continue;
        const bool ok = closes_to_tour(t, p);
        REQUIRE(ok == hand.has_value());
        if (!ok) continue;
        ++feasible;
        Tour moved = t;
        apply_sequential_move(moved, p);
        REQUIRE_FALSE(validate_tour(moved, n));
        CHECK(tour_edges(moved.order()) == *hand);
    }
    CHECK(feasible > 500);
}

TEST_CASE("crossing square is repaired by a 2-opt move") {
    const Instance sq = test::square();
    const QTable qt = QTable::by_distance(sq);
    for (int p1 = 0; p1 < 4; ++p1) {
        Rng rng(static_cast<std::uint64_t>(p1));
        Tour t(sq, {0, 2, 1, 3});
        REQUIRE(t.length() == 4828);
        const Tour before = t;
        const KOptEpisode ep = k_opt(sq, t, p1, qt, 5, rng);
        REQUIRE(ep.improved);
        CHECK(ep.gain == 828);
        CHECK(t.length() == 4000);
        CHECK(tour_length(sq, t.order()) == 4000);
        check_episode(sq, before, ep, 5);
    }
}

TEST_CASE("optimal square stays put") {
    const Instance sq = test::square();
    const QTable qt = QTable::by_distance(sq);
    Rng rng(1);
    Tour t(sq, {0, 1, 2, 3});
    const Tour before = t;
    for (int p1 = 0; p1 < 4; ++p1) {
        const KOptEpisode ep = k_opt(sq, t, p1, qt, 5, rng);
        CHECK_FALSE(ep.improved);
        CHECK(ep.path.empty());
    }
    CHECK(t == before);
}

TEST_CASE("k-opt contract under fuzzing") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Instance inst = test::random_euc(30 + static_cast<int>(seed), seed);
        const QTable qt = QTable::by_distance(inst, 10);
        Rng rng(seed);
        Tour t = test::random_tour(inst, rng);
        for (int s = 0; s < 200; ++s) {
            const Tour before = t;
            const int k_max = 2 + rand_below(rng, 5);
            const KOptEpisode ep = k_opt(inst, t, rand_below(rng, inst.size()), qt, k_max, rng);
            REQUIRE_FALSE(validate_tour(t, inst.size()));
            REQUIRE(tour_length(inst, t.order()) == t.length());
            if (ep.improved) {
                CHECK(t.length() == before.length() - ep.gain);
                check_episode(inst, before, ep, k_max);
                for (std::size_t j = 0; j + 1 < ep.path.size() / 2; ++j) {
                    const auto view = qt.candidate_view(ep.path[2 * j + 1], 5);
                    CHECK(std::find(view.begin(), view.end(), ep.path[2 * j + 2]) != view.end());
                }
            } else {
                CHECK(t == before);
            }
        }
    }
}

TEST_CASE("q_lkh on oracle instances") {
    int hits = 0, runs = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 6 + static_cast<int>(seed % 5);
        const Instance inst = test::random_euc(n, 500 + seed);
        const Length opt = exact_dp(inst).optimal_length;
        QTable qt = QTable::by_distance(inst);
        Rng rng(seed);
        Tour t = test::random_tour(inst, rng);
        const Length before = t.length();
        q_lkh(inst, t, qt, {}, rng);
        CHECK(t.length() <= before);
        CHECK(t.length() >= opt);
        CHECK(tour_length(inst, t.order()) == t.length());
        hits += t.length() == opt;
        ++runs;
    }
    MESSAGE("q_lkh reached the optimum in " << hits << " of " << runs << " runs");
    CHECK(hits * 10 >= runs * 9);
}

TEST_CASE("local optimum is a fixed point") {
    const Instance inst = test::random_euc(120, 9);
    QTable qt = QTable::by_distance(inst);
    QLkhOptions o;
    o.learn = false;
    Rng rng(4);
    Tour t = test::random_tour(inst, rng);
    while (q_lkh(inst, t, qt, o, rng).improvements > 0) {
    }
    const Tour before = t;
    const QLkhStats s = q_lkh(inst, t, qt, o, rng);
    CHECK(s.improvements == 0);
    CHECK(t == before);
}

TEST_CASE("determinism and learning") {
    const Instance inst = test::random_euc(150, 10);
    auto run = [&](std::uint64_t seed) {
        QTable qt = QTable::initial(inst, alpha_values(inst, {}, 50), minimum_one_tree(inst, {}).length);
        Rng rng(seed);
        Tour t = test::random_tour(inst, rng);
        q_lkh(inst, t, qt, {}, rng);
        std::ostringstream dump;
        qt.dump(inst, dump);
        return std::pair{t, dump.str()};
    };
    const auto a = run(5), b = run(5);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    const auto c = run(6);
    CHECK(c.second != a.second);
}
