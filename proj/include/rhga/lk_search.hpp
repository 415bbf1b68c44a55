#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "rhga/instance.hpp"
#include "rhga/q_table.hpp"
#include "rhga/tour.hpp"

namespace rhga {

/// p = (p1, p2, ..., p2m): (p_{2j-1}, p_{2j}) are removed tour edges,
/// (p_{2j}, p_{2j+1}) added candidate edges, and (p_{2m}, p1) closes the move.
struct KOptEpisode {
    std::vector<int> path;
    bool improved = false;
    Length gain = 0;
};

/// True when removing the edges of `p` and adding its chain plus the closing
/// edge yields a single Hamiltonian cycle of `t`.
bool closes_to_tour(const Tour& t, std::span<const int> p);

/// Applies the sequential move described by `p` (must satisfy closes_to_tour).
/// The cached length is not touched.
void apply_sequential_move(Tour& t, std::span<const int> p);

/// One depth-first k-opt search rooted at p1. On the first improving move the
/// tour is changed in place and the episode reports it; otherwise the tour is
/// unchanged and the path is empty.
KOptEpisode k_opt(const Instance& inst, Tour& t, int p1, const QTable& qt, int k_max, Rng& rng,
                  int breadth = 5);

struct QLkhOptions {
    int k_max = 5;
    int breadth = 5;
    double lambda = 0.1;
    double gamma = 0.9;
    bool learn = true;
    Bootstrap bootstrap = Bootstrap::Successor;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct QLkhStats {
    long episodes = 0;
    long improvements = 0;
    bool interrupted = false;
};

/// Local search with an active set of start cities; learns into `qt` when
/// enabled and re-sorts it at the end.
QLkhStats q_lkh(const Instance& inst, Tour& t, QTable& qt, const QLkhOptions& opts, Rng& rng);

}  // namespace rhga
