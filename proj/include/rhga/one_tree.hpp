#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "rhga/instance.hpp"

namespace rhga {

/// d(i,j) + pi[i] + pi[j].
inline double penalized(const Instance& inst, std::span<const double> pi, int i, int j) {
    return static_cast<double>(inst.distance(i, j)) + pi[static_cast<std::size_t>(i)] +
           pi[static_cast<std::size_t>(j)];
}

struct OneTree {
    int special = -1;
    /// Tree parent on V \ {special}; -1 for the root and for the special node.
    std::vector<int> parent;
    /// Tree order: every city appears after its parent. Excludes the special node.
    std::vector<int> topo;
    std::array<int, 2> special_edges{-1, -1};
    /// Held-Karp value: penalized 1-tree length minus 2 * sum(pi).
    double length = 0.0;
    std::vector<int> degree;

    /// All n edges of the 1-tree.
    std::vector<std::pair<int, int>> edges() const;
    bool contains(int i, int j) const;
};

/// Minimum 1-tree under penalties `pi` (empty span means all zero).
/// Dense Prim up to Instance::kMatrixLimit, sparse neighbor graph above.
OneTree minimum_one_tree(const Instance& inst, std::span<const double> pi);

/// Same, with the special node fixed by the caller.
OneTree minimum_one_tree_at(const Instance& inst, std::span<const double> pi, int special);

/// The default special node: maximal second-cheapest penalized incident edge.
int choose_special_node(const Instance& inst, std::span<const double> pi);

struct AscentResult {
    std::vector<double> pi;
    double bound = 0.0;
    int iterations = 0;
    /// Best bound after each iteration (non-decreasing).
    std::vector<double> history;
};

struct AscentOptions {
    int max_iters = 0;         // 0: 100 for n <= 10^4, 50 above
    double step_scale = 0.01;  // initial step = step_scale * bound / (2n)
    int patience = 10;         // halve the step after this many non-improving iterations
};

/// Subgradient ascent on the Held-Karp bound.
AscentResult ascend_penalties(const Instance& inst, const AscentOptions& opts = {});

struct AlphaEntry {
    int city;
    double alpha;
};

/// For each city, the min(K, n-1) cities with smallest alpha, ascending
/// (ties by distance, then index). Alpha is computed from the tree structure:
/// 0 on 1-tree edges, dpi - second cheapest edge at the special node for
/// edges touching it, dpi - max edge on the tree path otherwise.
std::vector<std::vector<AlphaEntry>> alpha_values(const Instance& inst, std::span<const double> pi,
                                                  int K);
std::vector<std::vector<AlphaEntry>> alpha_values(const Instance& inst, std::span<const double> pi,
                                                  const OneTree& tree, int K);

/// Structural alpha of a single pair against a given tree (any n).
double structural_alpha(const Instance& inst, std::span<const double> pi, const OneTree& tree, int i,
                        int j);

}  // namespace rhga
