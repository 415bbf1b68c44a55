#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rhga/instance.hpp"
#include "rhga/tour.hpp"

namespace rhga {

class TooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExactResult {
    Length optimal_length = 0;
    Tour optimal_tour;
};

/// Held-Karp dynamic program over subsets. n <= 18.
ExactResult exact_dp(const Instance& inst);

/// Enumerates every tour through city 0. n <= 10.
ExactResult exact_permutation(const Instance& inst);

/// Alpha by literally rebuilding the constrained 1-tree: Kruskal with (i,j)
/// forced on V \ {special} plus the two cheapest edges at the special node
/// (one of them forced to be (i,j) when it touches the special node).
/// Uses the same special node as minimum_one_tree. n <= 12.
double definitional_alpha(const Instance& inst, std::span<const double> pi, int i, int j);

/// Minimum 1-tree length with a fixed special node by enumerating all edge
/// subsets of V \ {special}. n <= 8.
double brute_force_one_tree(const Instance& inst, std::span<const double> pi, int special);

}  // namespace rhga
