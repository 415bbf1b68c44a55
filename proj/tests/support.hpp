#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rhga/instance.hpp"
#include "rhga/tour.hpp"

namespace test {

inline std::string data(const std::string& file) { return std::string(RHGA_TEST_DATA_DIR) + "/" + file; }

// Uniform integer points in [0, side)^2.
inline rhga::Instance random_euc(int n, std::uint64_t seed, int side = 1000) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coord(0, side - 1);
    std::vector<rhga::Point> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
    return rhga::Instance::from_points("rand" + std::to_string(n) + "_" + std::to_string(seed), rhga::Metric::Euc2d,
                                       std::move(pts));
}

inline rhga::Instance square(double scale = 1000.0) {
    return rhga::Instance::from_points("square", rhga::Metric::Euc2d,
                                       {{0, 0}, {scale, 0}, {scale, scale}, {0, scale}});
}

inline rhga::Tour random_tour(const rhga::Instance& inst, rhga::Rng& rng) {
    std::vector<int> order(static_cast<std::size_t>(inst.size()));
    for (int i = 0; i < inst.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    return rhga::Tour(inst, std::move(order));
}

inline std::vector<int> identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

}  // namespace test
