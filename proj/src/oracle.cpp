#include "rhga/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <tuple>

#include "rhga/one_tree.hpp"

namespace rhga {

ExactResult exact_dp(const Instance& inst) {
    const int n = inst.size();
    if (n > 18) throw TooLarge("exact_dp supports at most 18 cities");
    // Subsets of cities 1..n-1; city 0 is the fixed start.
    const int m = n - 1;
    const std::size_t full = std::size_t{1} << m;
    constexpr Length kInf = std::numeric_limits<Length>::max() / 4;
    std::vector<Length> cost(full * static_cast<std::size_t>(m), kInf);
    std::vector<std::int8_t> from(full * static_cast<std::size_t>(m), -1);
    auto at = [&](std::size_t set, int last) { return set * static_cast<std::size_t>(m) + static_cast<std::size_t>(last); };
    for (int j = 0; j < m; ++j) cost[at(std::size_t{1} << j, j)] = inst.distance(0, j + 1);
    for (std::size_t set = 1; set < full; ++set) {
        for (int last = 0; last < m; ++last) {
            if (!(set & (std::size_t{1} << last))) continue;
            const Length c = cost[at(set, last)];
            if (c >= kInf) continue;
            for (int nx = 0; nx < m; ++nx) {
                if (set & (std::size_t{1} << nx)) continue;
                const std::size_t ns = set | (std::size_t{1} << nx);
                const Length v = c + inst.distance(last + 1, nx + 1);
                if (v < cost[at(ns, nx)]) {
                    cost[at(ns, nx)] = v;
                    from[at(ns, nx)] = static_cast<std::int8_t>(last);
                }
            }
        }
    }
    Length best = kInf;
    int best_last = 0;
    for (int last = 0; last < m; ++last) {
        const Length v = cost[at(full - 1, last)] + inst.distance(last + 1, 0);
        if (v < best) {
            best = v;
            best_last = last;
        }
    }
    std::vector<int> order;
    std::size_t set = full - 1;
    int last = best_last;
    while (last >= 0) {
        order.push_back(last + 1);
        const int prev = from[at(set, last)];
        set &= ~(std::size_t{1} << last);
        last = prev;
    }
    order.push_back(0);
    std::reverse(order.begin(), order.end());
    ExactResult r;
    r.optimal_tour = Tour(inst, std::move(order));
    r.optimal_length = r.optimal_tour.length();
    return r;
}

ExactResult exact_permutation(const Instance& inst) {
    const int n = inst.size();
    if (n > 10) throw TooLarge("exact_permutation supports at most 10 cities");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Length best = std::numeric_limits<Length>::max();
    std::vector<int> best_order = order;
    do {
        const Length l = tour_length(inst, order);
        if (l < best) {
            best = l;
            best_order = order;
        }
    } while (std::next_permutation(order.begin() + 1, order.end()));
    ExactResult r;
    r.optimal_tour = Tour(inst, std::move(best_order));
    r.optimal_length = best;
    return r;
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

double w(const Instance& inst, std::span<const double> pi, int i, int j) {
    const double pi_i = pi.empty() ? 0.0 : pi[static_cast<std::size_t>(i)];
    const double pi_j = pi.empty() ? 0.0 : pi[static_cast<std::size_t>(j)];
    return inst.distance(i, j) + pi_i + pi_j;
}

// Minimum 1-tree at `v`, optionally forcing one edge; penalized length.
double constrained_one_tree(const Instance& inst, std::span<const double> pi, int v, int fi, int fj) {
    const int n = inst.size();
    double total = 0.0;
    // Two edges at v.
    std::vector<std::pair<double, int>> at_v;
    for (int j = 0; j < n; ++j)
        if (j != v) at_v.emplace_back(w(inst, pi, v, j), j);
    std::sort(at_v.begin(), at_v.end());
    int forced_v = -1;
    if (fi == v) forced_v = fj;
    if (fj == v) forced_v = fi;
    if (forced_v >= 0) {
        total += w(inst, pi, v, forced_v);
        for (const auto& [c, j] : at_v)
            if (j != forced_v) {
                total += c;
                break;
            }
    } else {
        total += at_v[0].first + at_v[1].first;
    }
    // Kruskal on V \ {v}.
    std::vector<std::tuple<double, int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (i != v && j != v) edges.emplace_back(w(inst, pi, i, j), i, j);
    std::sort(edges.begin(), edges.end());
    Dsu dsu(n);
    if (forced_v < 0 && fi >= 0) {
        dsu.unite(fi, fj);
        total += w(inst, pi, fi, fj);
    }
    for (const auto& [c, i, j] : edges)
        if (dsu.unite(i, j)) total += c;
    return total;
}

}  // namespace

double definitional_alpha(const Instance& inst, std::span<const double> pi, int i, int j) {
    if (inst.size() > 12) throw TooLarge("definitional_alpha supports at most 12 cities");
    const int v = choose_special_node(inst, pi);
    return constrained_one_tree(inst, pi, v, i, j) - constrained_one_tree(inst, pi, v, -1, -1);
}

double brute_force_one_tree(const Instance& inst, std::span<const double> pi, int special) {
    const int n = inst.size();
    if (n > 8) throw TooLarge("brute_force_one_tree supports at most 8 cities");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (i != special && j != special) edges.emplace_back(i, j);
    const int need = n - 2;  // spanning tree on n-1 nodes
    const int e = static_cast<int>(edges.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
        if (std::popcount(mask) != need) continue;
        Dsu dsu(n);
        double total = 0.0;
        bool ok = true;
        for (int k = 0; k < e && ok; ++k)
            if (mask & (1u << k)) {
                ok = dsu.unite(edges[static_cast<std::size_t>(k)].first, edges[static_cast<std::size_t>(k)].second);
                total += w(inst, pi, edges[static_cast<std::size_t>(k)].first, edges[static_cast<std::size_t>(k)].second);
            }
        if (!ok) continue;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (a != special && b != special)
                    best = std::min(best, total + w(inst, pi, special, a) + w(inst, pi, special, b));
    }
    double sum_pi = 0.0;
    for (double p : pi) sum_pi += p;
    return best - 2.0 * sum_pi;
}

}  // namespace rhga
