#include "rhga/tour.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rhga {

Tour::Tour(const Instance& inst, std::vector<int> order) {
    if (static_cast<int>(order.size()) != inst.size())
        throw std::invalid_argument("tour size differs from instance");
    assign_order(std::move(order));
    if (auto v = validate_tour(order_, pos_, inst.size()))
        throw std::invalid_argument("not a tour: " + v->describe());
    length_ = tour_length(inst, order_);
}

void Tour::assign_order(std::vector<int> order) {
    order_ = std::move(order);
    pos_.assign(order_.size(), -1);
    for (std::size_t k = 0; k < order_.size(); ++k) {
        const int c = order_[k];
        if (c >= 0 && static_cast<std::size_t>(c) < pos_.size()) pos_[static_cast<std::size_t>(c)] = static_cast<int>(k);
    }
}

Length Tour::recompute_length(const Instance& inst) {
    length_ = tour_length(inst, order_);
    return length_;
}

void Tour::reverse_path(int i, int j) {
    const int n = size();
    int len = j - i;
    if (len < 0) len += n;
    len += 1;  // number of cities in i..j
    if (2 * len > n) {
        // Reverse the complement j+1 .. i-1 instead.
        const int ni = j + 1 == n ? 0 : j + 1;
        const int nj = i == 0 ? n - 1 : i - 1;
        i = ni;
        j = nj;
        len = n - len;
    }
    for (int s = 0; s < len / 2; ++s) {
        const int a = order_[static_cast<std::size_t>(i)];
        const int b = order_[static_cast<std::size_t>(j)];
        order_[static_cast<std::size_t>(i)] = b;
        order_[static_cast<std::size_t>(j)] = a;
        pos_[static_cast<std::size_t>(b)] = i;
        pos_[static_cast<std::size_t>(a)] = j;
        i = i + 1 == n ? 0 : i + 1;
        j = j == 0 ? n - 1 : j - 1;
    }
}

Length tour_length(const Instance& inst, std::span<const int> order) {
    Length total = 0;
    const std::size_t n = order.size();
    for (std::size_t k = 0; k < n; ++k) total += inst.distance(order[k], order[(k + 1) % n]);
    return total;
}

Length tour_length(const Instance& inst, Tour& t) { return t.recompute_length(inst); }

std::string TourViolation::describe() const {
    switch (kind) {
        case Kind::DuplicateCity:
            return "duplicate city " + std::to_string(city) + " at position " + std::to_string(index);
        case Kind::MissingCity: return "missing city " + std::to_string(city);
        case Kind::PosMismatch:
            return "pos mismatch for city " + std::to_string(city) + " at position " + std::to_string(index);
        case Kind::WrongSize: return "wrong size " + std::to_string(index);
    }
    return "?";
}

std::optional<TourViolation> validate_tour(std::span<const int> order, std::span<const int> pos, int n) {
    using Kind = TourViolation::Kind;
    if (static_cast<int>(order.size()) != n)
        return TourViolation{Kind::WrongSize, static_cast<int>(order.size()), -1};
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        const int c = order[static_cast<std::size_t>(k)];
        if (c < 0 || c >= n) return TourViolation{Kind::MissingCity, k, c};
        if (seen[static_cast<std::size_t>(c)]) return TourViolation{Kind::DuplicateCity, k, c};
        seen[static_cast<std::size_t>(c)] = 1;
    }
    if (static_cast<int>(pos.size()) != n) return TourViolation{Kind::PosMismatch, -1, -1};
    for (int k = 0; k < n; ++k) {
        const int c = order[static_cast<std::size_t>(k)];
        if (pos[static_cast<std::size_t>(c)] != k) return TourViolation{Kind::PosMismatch, k, c};
    }
    return std::nullopt;
}

std::optional<TourViolation> validate_tour(const Tour& t, int n) {
    return validate_tour(t.order(), t.positions(), n);
}

void two_opt_descent(const Instance& inst, const std::vector<std::vector<int>>& candidates, Tour& t,
                     Rng& rng) {
    const int n = t.size();
    std::vector<int> sweep(static_cast<std::size_t>(n));
    std::iota(sweep.begin(), sweep.end(), 0);
    Length length = t.length();
    bool improved = true;
    while (improved) {
        improved = false;
        std::shuffle(sweep.begin(), sweep.end(), rng);
        for (int a : sweep) {
            for (int dir = 0; dir < 2; ++dir) {
                // dir 0: edge (a, next a); dir 1: edge (prev a, a).
                const int an = dir == 0 ? t.next(a) : t.prev(a);
                const int d_a = inst.distance(a, an);
                for (int c : candidates[static_cast<std::size_t>(a)]) {
                    const int d_ac = inst.distance(a, c);
                    if (d_ac >= d_a) continue;
                    const int cn = dir == 0 ? t.next(c) : t.prev(c);
                    if (c == an || cn == a) continue;
                    const int gain = d_a + inst.distance(c, cn) - d_ac - inst.distance(an, cn);
                    if (gain <= 0) continue;
                    if (dir == 0) t.reverse_path(t.position(an), t.position(c));
                    else t.reverse_path(t.position(c), t.position(an));
                    length -= gain;
                    improved = true;
                    break;
                }
            }
        }
    }
    t.set_length(length);
}

Tour greedy_2opt_init(const Instance& inst, const std::vector<std::vector<int>>& candidates, Rng& rng) {
    std::vector<int> order(static_cast<std::size_t>(inst.size()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Tour t(inst, std::move(order));
    two_opt_descent(inst, candidates, t, rng);
    return t;
}

std::vector<int> canonical_order(std::span<const int> order) {
    const std::size_t n = order.size();
    std::vector<int> out;
    out.reserve(n);
    std::size_t start = 0;
    while (order[start] != 0) ++start;
    const int fwd = order[(start + 1) % n];
    const int bwd = order[(start + n - 1) % n];
    if (fwd <= bwd) {
        for (std::size_t k = 0; k < n; ++k) out.push_back(order[(start + k) % n]);
    } else {
        for (std::size_t k = 0; k < n; ++k) out.push_back(order[(start + n - k) % n]);
    }
    return out;
}

}  // namespace rhga
