#include "rhga/one_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace rhga {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSparseNeighbors = 50;

bool dense(const Instance& inst) { return inst.size() <= Instance::kMatrixLimit; }

// Symmetrized nearest-neighbor graph used above the dense limit.
std::vector<std::vector<int>> sparse_graph(const Instance& inst) {
    auto nn = nearest_neighbors(inst, kSparseNeighbors);
    const auto n = static_cast<std::size_t>(inst.size());
    std::vector<std::vector<int>> g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int j : nn[i]) {
            g[i].push_back(j);
            g[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
        }
    for (auto& row : g) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return g;
}

double pi_at(std::span<const double> pi, int i) {
    return pi.empty() ? 0.0 : pi[static_cast<std::size_t>(i)];
}

double dpi(const Instance& inst, std::span<const double> pi, int i, int j) {
    return static_cast<double>(inst.distance(i, j)) + pi_at(pi, i) + pi_at(pi, j);
}

// Two cheapest penalized edges at v, ties by index.
std::array<int, 2> two_cheapest(const Instance& inst, std::span<const double> pi, int v,
                                const std::vector<int>* candidates) {
    std::array<int, 2> best{-1, -1};
    std::array<double, 2> w{kInf, kInf};
    auto offer = [&](int j) {
        if (j == v) return;
        const double d = dpi(inst, pi, v, j);
        if (d < w[0]) {
            best[1] = best[0];
            w[1] = w[0];
            best[0] = j;
            w[0] = d;
        } else if (d < w[1]) {
            best[1] = j;
            w[1] = d;
        }
    };
    if (candidates) {
        for (int j : *candidates) offer(j);
    } else {
        for (int j = 0; j < inst.size(); ++j) offer(j);
    }
    return best;
}

int choose_special(const Instance& inst, std::span<const double> pi,
                   const std::vector<std::vector<int>>* graph) {
    int best = 0;
    double best_w = -kInf;
    for (int v = 0; v < inst.size(); ++v) {
        const auto e = two_cheapest(inst, pi, v, graph ? &(*graph)[static_cast<std::size_t>(v)] : nullptr);
        if (e[1] < 0) continue;
        const double w = dpi(inst, pi, v, e[1]);
        if (w > best_w) {
            best_w = w;
            best = v;
        }
    }
    return best;
}

void finish_tree(const Instance& inst, std::span<const double> pi, OneTree& t, double tree_weight) {
    const int n = inst.size();
    t.degree.assign(static_cast<std::size_t>(n), 0);
    for (int u : t.topo) {
        const int p = t.parent[static_cast<std::size_t>(u)];
        if (p < 0) continue;
        ++t.degree[static_cast<std::size_t>(u)];
        ++t.degree[static_cast<std::size_t>(p)];
    }
    double total = tree_weight;
    for (int j : t.special_edges) {
        ++t.degree[static_cast<std::size_t>(t.special)];
        ++t.degree[static_cast<std::size_t>(j)];
        total += dpi(inst, pi, t.special, j);
    }
    double sum_pi = 0.0;
    for (int i = 0; i < n; ++i) sum_pi += pi_at(pi, i);
    t.length = total - 2.0 * sum_pi;
}

OneTree dense_tree(const Instance& inst, std::span<const double> pi, int special) {
    const int n = inst.size();
    OneTree t;
    t.special = special;
    t.parent.assign(static_cast<std::size_t>(n), -1);
    t.topo.reserve(static_cast<std::size_t>(n - 1));
    std::vector<double> key(static_cast<std::size_t>(n), kInf);
    std::vector<int> from(static_cast<std::size_t>(n), -1);
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    done[static_cast<std::size_t>(special)] = 1;
    const int root = special == 0 ? 1 : 0;
    key[static_cast<std::size_t>(root)] = 0.0;
    double weight = 0.0;
    for (int step = 0; step < n - 1; ++step) {
        int u = -1;
        double best = kInf;
        for (int j = 0; j < n; ++j)
            if (!done[static_cast<std::size_t>(j)] && key[static_cast<std::size_t>(j)] < best) {
                best = key[static_cast<std::size_t>(j)];
                u = j;
            }
        done[static_cast<std::size_t>(u)] = 1;
        t.topo.push_back(u);
        t.parent[static_cast<std::size_t>(u)] = from[static_cast<std::size_t>(u)];
        if (u != root) weight += best;
        for (int j = 0; j < n; ++j) {
            if (done[static_cast<std::size_t>(j)]) continue;
            const double w = dpi(inst, pi, u, j);
            if (w < key[static_cast<std::size_t>(j)]) {
                key[static_cast<std::size_t>(j)] = w;
                from[static_cast<std::size_t>(j)] = u;
            }
        }
    }
    t.special_edges = two_cheapest(inst, pi, special, nullptr);
    finish_tree(inst, pi, t, weight);
    return t;
}

OneTree sparse_tree(const Instance& inst, std::span<const double> pi, int special,
                    const std::vector<std::vector<int>>& g) {
    const int n = inst.size();
    OneTree t;
    t.special = special;
    t.parent.assign(static_cast<std::size_t>(n), -1);
    t.topo.reserve(static_cast<std::size_t>(n - 1));
    std::vector<double> key(static_cast<std::size_t>(n), kInf);
    std::vector<int> from(static_cast<std::size_t>(n), -1);
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    done[static_cast<std::size_t>(special)] = 1;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    const int root = special == 0 ? 1 : 0;
    key[static_cast<std::size_t>(root)] = 0.0;
    heap.emplace(0.0, root);
    double weight = 0.0;
    int added = 0;
    while (added < n - 1) {
        if (heap.empty()) {
            // Neighbor graph is disconnected: cheapest edge from the tree to
            // any unreached city by full scan.
            double best = kInf;
            int bu = -1, bv = -1;
            for (int u : t.topo)
                for (int v = 0; v < n; ++v) {
                    if (done[static_cast<std::size_t>(v)]) continue;
                    const double w = dpi(inst, pi, u, v);
                    if (w < best) {
                        best = w;
                        bu = u;
                        bv = v;
                    }
                }
            key[static_cast<std::size_t>(bv)] = best;
            from[static_cast<std::size_t>(bv)] = bu;
            heap.emplace(best, bv);
        }
        auto [k, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)] || k > key[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        ++added;
        t.topo.push_back(u);
        t.parent[static_cast<std::size_t>(u)] = from[static_cast<std::size_t>(u)];
        if (u != root) weight += k;
        for (int j : g[static_cast<std::size_t>(u)]) {
            if (done[static_cast<std::size_t>(j)]) continue;
            const double w = dpi(inst, pi, u, j);
            if (w < key[static_cast<std::size_t>(j)]) {
                key[static_cast<std::size_t>(j)] = w;
                from[static_cast<std::size_t>(j)] = u;
                heap.emplace(w, j);
            }
        }
    }
    t.special_edges = two_cheapest(inst, pi, special, &g[static_cast<std::size_t>(special)]);
    finish_tree(inst, pi, t, weight);
    return t;
}

OneTree build(const Instance& inst, std::span<const double> pi, std::optional<int> special,
              const std::vector<std::vector<int>>* graph) {
    if (!pi.empty() && static_cast<int>(pi.size()) != inst.size())
        throw std::invalid_argument("penalty vector size differs from instance");
    if (dense(inst)) {
        const int v = special ? *special : choose_special(inst, pi, nullptr);
        return dense_tree(inst, pi, v);
    }
    std::vector<std::vector<int>> local;
    if (!graph) {
        local = sparse_graph(inst);
        graph = &local;
    }
    const int v = special ? *special : choose_special(inst, pi, graph);
    return sparse_tree(inst, pi, v, *graph);
}

double second_special_weight(const Instance& inst, std::span<const double> pi, const OneTree& t) {
    return dpi(inst, pi, t.special, t.special_edges[1]);
}

// Max penalized edge on tree paths via binary lifting (sparse case).
class PathMax {
public:
    PathMax(const Instance& inst, std::span<const double> pi, const OneTree& t) {
        const auto n = static_cast<std::size_t>(inst.size());
        depth_.assign(n, 0);
        int levels = 1;
        while ((1 << levels) < inst.size()) ++levels;
        up_.assign(static_cast<std::size_t>(levels), std::vector<int>(n, -1));
        mx_.assign(static_cast<std::size_t>(levels), std::vector<double>(n, -kInf));
        for (int u : t.topo) {
            const int p = t.parent[static_cast<std::size_t>(u)];
            if (p < 0) {
                up_[0][static_cast<std::size_t>(u)] = u;
                continue;
            }
            depth_[static_cast<std::size_t>(u)] = depth_[static_cast<std::size_t>(p)] + 1;
            up_[0][static_cast<std::size_t>(u)] = p;
            mx_[0][static_cast<std::size_t>(u)] = dpi(inst, pi, u, p);
        }
        for (std::size_t l = 1; l < up_.size(); ++l)
            for (int u : t.topo) {
                const auto su = static_cast<std::size_t>(u);
                const int mid = up_[l - 1][su];
                up_[l][su] = up_[l - 1][static_cast<std::size_t>(mid)];
                mx_[l][su] = std::max(mx_[l - 1][su], mx_[l - 1][static_cast<std::size_t>(mid)]);
            }
    }

    double query(int a, int b) const {
        double best = -kInf;
        if (depth_[static_cast<std::size_t>(a)] < depth_[static_cast<std::size_t>(b)]) std::swap(a, b);
        int diff = depth_[static_cast<std::size_t>(a)] - depth_[static_cast<std::size_t>(b)];
        for (std::size_t l = 0; diff; ++l, diff >>= 1)
            if (diff & 1) {
                best = std::max(best, mx_[l][static_cast<std::size_t>(a)]);
                a = up_[l][static_cast<std::size_t>(a)];
            }
        if (a == b) return best;
        for (std::size_t l = up_.size(); l-- > 0;) {
            const int ua = up_[l][static_cast<std::size_t>(a)];
            const int ub = up_[l][static_cast<std::size_t>(b)];
            if (ua != ub) {
                best = std::max({best, mx_[l][static_cast<std::size_t>(a)], mx_[l][static_cast<std::size_t>(b)]});
                a = ua;
                b = ub;
            }
        }
        return std::max({best, mx_[0][static_cast<std::size_t>(a)], mx_[0][static_cast<std::size_t>(b)]});
    }

private:
    std::vector<int> depth_;
    std::vector<std::vector<int>> up_;
    std::vector<std::vector<double>> mx_;
};

void keep_top(const Instance& inst, int i, std::vector<AlphaEntry>& row, int K) {
    auto less = [&](const AlphaEntry& a, const AlphaEntry& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        const int da = inst.distance(i, a.city), db = inst.distance(i, b.city);
        if (da != db) return da < db;
        return a.city < b.city;
    };
    const auto take = std::min(row.size(), static_cast<std::size_t>(K));
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(take), row.end(), less);
    row.resize(take);
}

}  // namespace

std::vector<std::pair<int, int>> OneTree::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u : topo)
        if (parent[static_cast<std::size_t>(u)] >= 0) out.emplace_back(u, parent[static_cast<std::size_t>(u)]);
    for (int j : special_edges) out.emplace_back(special, j);
    return out;
}

bool OneTree::contains(int i, int j) const {
    if (i == special) return j == special_edges[0] || j == special_edges[1];
    if (j == special) return i == special_edges[0] || i == special_edges[1];
    return parent[static_cast<std::size_t>(i)] == j || parent[static_cast<std::size_t>(j)] == i;
}

OneTree minimum_one_tree(const Instance& inst, std::span<const double> pi) {
    return build(inst, pi, std::nullopt, nullptr);
}

OneTree minimum_one_tree_at(const Instance& inst, std::span<const double> pi, int special) {
    return build(inst, pi, special, nullptr);
}

int choose_special_node(const Instance& inst, std::span<const double> pi) {
    if (dense(inst)) return choose_special(inst, pi, nullptr);
    const auto g = sparse_graph(inst);
    return choose_special(inst, pi, &g);
}

AscentResult ascend_penalties(const Instance& inst, const AscentOptions& opts) {
    const int n = inst.size();
    int max_iters = opts.max_iters > 0 ? opts.max_iters : (n <= 10000 ? 100 : 50);
    std::vector<std::vector<int>> graph;
    if (!dense(inst)) graph = sparse_graph(inst);
    const auto* gp = graph.empty() ? nullptr : &graph;

    std::vector<double> pi(static_cast<std::size_t>(n), 0.0);
    AscentResult res;
    res.bound = -kInf;
    double step = 0.0;
    int since_best = 0;
    for (int it = 0; it < max_iters; ++it) {
        const OneTree t = build(inst, pi, std::nullopt, gp);
        ++res.iterations;
        if (t.length > res.bound) {
            res.bound = t.length;
            res.pi = pi;
            since_best = 0;
        } else if (++since_best >= opts.patience) {
            step /= 2.0;
            since_best = 0;
        }
        res.history.push_back(res.bound);
        if (it == 0) {
            step = opts.step_scale * std::abs(t.length) / (2.0 * n);
            if (step <= 0.0) step = 1.0;
        }
        bool tour = true;
        for (int d : t.degree) tour = tour && d == 2;
        if (tour) break;
        for (int i = 0; i < n; ++i)
            pi[static_cast<std::size_t>(i)] += step * (t.degree[static_cast<std::size_t>(i)] - 2);
    }
    return res;
}

double structural_alpha(const Instance& inst, std::span<const double> pi, const OneTree& tree, int i,
                        int j) {
    if (i == j) return 0.0;
    if (tree.contains(i, j)) return 0.0;
    if (i == tree.special || j == tree.special)
        return dpi(inst, pi, i, j) - second_special_weight(inst, pi, tree);
    // Walk both endpoints to their common ancestor.
    const auto n = static_cast<std::size_t>(inst.size());
    std::vector<char> on_path(n, 0);
    for (int u = i; u >= 0; u = tree.parent[static_cast<std::size_t>(u)]) on_path[static_cast<std::size_t>(u)] = 1;
    int lca = j;
    while (!on_path[static_cast<std::size_t>(lca)]) lca = tree.parent[static_cast<std::size_t>(lca)];
    double best = -kInf;
    for (int u = i; u != lca; u = tree.parent[static_cast<std::size_t>(u)])
        best = std::max(best, dpi(inst, pi, u, tree.parent[static_cast<std::size_t>(u)]));
    for (int u = j; u != lca; u = tree.parent[static_cast<std::size_t>(u)])
        best = std::max(best, dpi(inst, pi, u, tree.parent[static_cast<std::size_t>(u)]));
    return dpi(inst, pi, i, j) - best;
}

std::vector<std::vector<AlphaEntry>> alpha_values(const Instance& inst, std::span<const double> pi, int K) {
    return alpha_values(inst, pi, minimum_one_tree(inst, pi), K);
}

std::vector<std::vector<AlphaEntry>> alpha_values(const Instance& inst, std::span<const double> pi,
                                                  const OneTree& tree, int K) {
    const int n = inst.size();
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::vector<AlphaEntry>> out(un);
    const int v = tree.special;
    const double second = second_special_weight(inst, pi, tree);
    auto special_alpha = [&](int j) {
        if (j == tree.special_edges[0] || j == tree.special_edges[1]) return 0.0;
        return dpi(inst, pi, v, j) - second;
    };

    if (dense(inst)) {
        std::vector<double> beta(un, 0.0);
        std::vector<char> mark(un, 0);
        const int root = tree.topo.front();
        for (int i = 0; i < n; ++i) {
            auto& row = out[static_cast<std::size_t>(i)];
            row.reserve(un - 1);
            if (i == v) {
                for (int j = 0; j < n; ++j)
                    if (j != v) row.push_back({j, special_alpha(j)});
                keep_top(inst, i, row, K);
                continue;
            }
            // beta[j] = max penalized edge on the tree path i..j.
            std::fill(mark.begin(), mark.end(), 0);
            beta[static_cast<std::size_t>(i)] = -kInf;
            mark[static_cast<std::size_t>(i)] = 1;
            for (int u = i; u != root; u = tree.parent[static_cast<std::size_t>(u)]) {
                const int p = tree.parent[static_cast<std::size_t>(u)];
                beta[static_cast<std::size_t>(p)] = std::max(beta[static_cast<std::size_t>(u)], dpi(inst, pi, u, p));
                mark[static_cast<std::size_t>(p)] = 1;
            }
            for (int u : tree.topo) {
                if (mark[static_cast<std::size_t>(u)]) continue;
                const int p = tree.parent[static_cast<std::size_t>(u)];
                beta[static_cast<std::size_t>(u)] = std::max(beta[static_cast<std::size_t>(p)], dpi(inst, pi, u, p));
            }
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double a;
                if (j == v) a = special_alpha(i);
                else if (tree.contains(i, j)) a = 0.0;
                else a = dpi(inst, pi, i, j) - beta[static_cast<std::size_t>(j)];
                row.push_back({j, a});
            }
            keep_top(inst, i, row, K);
        }
        return out;
    }

    const auto graph = sparse_graph(inst);
    const PathMax pm(inst, pi, tree);
    for (int i = 0; i < n; ++i) {
        auto& row = out[static_cast<std::size_t>(i)];
        for (int j : graph[static_cast<std::size_t>(i)]) {
            double a;
            if (i == v) a = special_alpha(j);
            else if (j == v) a = special_alpha(i);
            else if (tree.contains(i, j)) a = 0.0;
            else a = dpi(inst, pi, i, j) - pm.query(i, j);
            row.push_back({j, a});
        }
        keep_top(inst, i, row, K);
    }
    return out;
}

}  // namespace rhga
