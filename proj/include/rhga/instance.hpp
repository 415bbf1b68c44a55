#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rhga {

using Length = std::int64_t;

enum class Metric { Euc2d, Ceil2d, Geo, Att, Explicit };

std::string to_string(Metric m);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

class TsplibError : public std::runtime_error {
public:
    enum class Kind { UnsupportedMetric, MalformedHeader, DimensionMismatch, InvalidTour };

    TsplibError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Immutable TSP instance with the TSPLIB integer distance.
///
/// Cities are indexed densely from 0; the labels used in files are kept
/// in `label()`. Distances are tabulated up to `kMatrixLimit` cities and
/// computed on demand above that.
class Instance {
public:
    static constexpr int kMatrixLimit = 3000;

    static Instance from_points(std::string name, Metric metric, std::vector<Point> points,
                                std::vector<int> labels = {});
    /// `weights` is a full row-major n*n matrix.
    static Instance from_matrix(std::string name, int n, std::vector<int> weights,
                                std::vector<int> labels = {});

    const std::string& name() const noexcept { return name_; }
    int size() const noexcept { return n_; }
    Metric metric() const noexcept { return metric_; }
    bool has_points() const noexcept { return !points_.empty(); }
    std::span<const Point> points() const noexcept { return points_; }
    int label(int city) const { return labels_[static_cast<std::size_t>(city)]; }
    std::optional<int> city_of_label(int label) const;

    int distance(int i, int j) const {
        if (!matrix_.empty()) {
            return matrix_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                           static_cast<std::size_t>(j)];
        }
        return compute(i, j);
    }

    std::optional<Length> bks() const noexcept { return bks_; }
    void set_bks(std::optional<Length> value) { bks_ = value; }

private:
    Instance() = default;
    int compute(int i, int j) const;
    void tabulate();

    std::string name_;
    int n_ = 0;
    Metric metric_ = Metric::Euc2d;
    std::vector<Point> points_;
    std::vector<int> matrix_;
    std::vector<int> labels_;
    std::optional<Length> bks_;
};

/// Raw TSPLIB distance functions on coordinates, exposed for testing.
int euc_2d(Point a, Point b);
int ceil_2d(Point a, Point b);
int geo(Point a, Point b);
int att(Point a, Point b);

Instance parse_tsplib(std::istream& in);
Instance load_tsplib(const std::string& path);

/// Reads a TOUR file and returns internal (0-based) city indices.
std::vector<int> parse_tour(std::istream& in, const Instance& inst);
std::vector<int> load_tour(const std::string& path, const Instance& inst);

/// Writes a TSPLIB TOUR rotated to start at city 0. Throws InvalidTour.
void write_tour(const Instance& inst, std::span<const int> order, std::ostream& out);

/// "name integer" per line; '#' starts a comment.
std::map<std::string, Length> parse_bks_catalog(std::istream& in);
std::map<std::string, Length> load_bks_catalog(const std::string& path);

/// For each city, up to `k` other cities ordered by distance (ties by index).
/// Uses a uniform grid for planar metrics on large instances.
std::vector<std::vector<int>> nearest_neighbors(const Instance& inst, int k);

}  // namespace rhga
