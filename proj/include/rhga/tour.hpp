#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rhga/instance.hpp"

namespace rhga {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound).
inline int rand_below(Rng& rng, int bound) {
    return std::uniform_int_distribution<int>(0, bound - 1)(rng);
}

/// Array tour: order[k] is the k-th city, pos is the inverse permutation.
class Tour {
public:
    Tour() = default;
    /// Takes ownership of `order` (must be a permutation) and computes its length.
    Tour(const Instance& inst, std::vector<int> order);

    int size() const noexcept { return static_cast<int>(order_.size()); }
    int at(int k) const { return order_[static_cast<std::size_t>(k)]; }
    int position(int city) const { return pos_[static_cast<std::size_t>(city)]; }
    std::span<const int> order() const noexcept { return order_; }
    std::span<const int> positions() const noexcept { return pos_; }

    int next(int city) const {
        int k = position(city) + 1;
        return at(k == size() ? 0 : k);
    }
    int prev(int city) const {
        int k = position(city);
        return at(k == 0 ? size() - 1 : k - 1);
    }
    bool has_edge(int a, int b) const { return next(a) == b || prev(a) == b; }

    Length length() const noexcept { return length_; }
    void set_length(Length value) noexcept { length_ = value; }
    /// Recomputes the length from scratch and refreshes the cached value.
    Length recompute_length(const Instance& inst);

    /// Reverses the cyclic path of positions i..j (inclusive, i may exceed j
    /// to wrap). Reverses the complementary path instead when it is shorter;
    /// both give the same cyclic tour. The cached length is not touched.
    void reverse_path(int i, int j);

    /// Replaces the sequence; pos is rebuilt. The cached length is not touched.
    void assign_order(std::vector<int> order);

    /// Test hook for corrupting state in validation tests.
    std::vector<int>& mutable_positions() noexcept { return pos_; }

    friend bool operator==(const Tour& a, const Tour& b) {
        return a.order_ == b.order_ && a.length_ == b.length_;
    }

private:
    std::vector<int> order_;
    std::vector<int> pos_;
    Length length_ = 0;
};

Length tour_length(const Instance& inst, std::span<const int> order);
Length tour_length(const Instance& inst, Tour& t);

struct TourViolation {
    enum class Kind { DuplicateCity, MissingCity, PosMismatch, WrongSize };
    Kind kind;
    int index;  // position in order (or city for MissingCity)
    int city;
    std::string describe() const;
};

std::optional<TourViolation> validate_tour(std::span<const int> order, std::span<const int> pos,
                                           int n);
std::optional<TourViolation> validate_tour(const Tour& t, int n);

/// (prev, next) of `city`.
inline std::pair<int, int> neighbors(const Tour& t, int city) { return {t.prev(city), t.next(city)}; }

/// Random permutation improved by first-improvement 2-opt restricted to
/// `candidates` (per-city neighbor lists), sweeping cities in random order
/// until a full sweep finds nothing.
Tour greedy_2opt_init(const Instance& inst, const std::vector<std::vector<int>>& candidates,
                      Rng& rng);

/// Same as above but starting from a given tour.
void two_opt_descent(const Instance& inst, const std::vector<std::vector<int>>& candidates,
                     Tour& t, Rng& rng);

/// Rotates to start at city 0 and orients so that the second city is the
/// smaller of the two neighbors of 0. Used to compare tours as cycles.
std::vector<int> canonical_order(std::span<const int> order);

}  // namespace rhga
