#include "rhga/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace rhga {

namespace {

int nint(double x) { return static_cast<int>(x + 0.5); }

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

double geo_radians(double coord) {
    constexpr double kPi = 3.141592;
    const double deg = std::trunc(coord);
    const double min = coord - deg;
    return kPi * (deg + 5.0 * min / 3.0) / 180.0;
}

enum class MatrixFormat { Full, UpperRow, LowerRow, UpperDiagRow, LowerDiagRow };

std::optional<MatrixFormat> parse_format(const std::string& f) {
    if (f == "FULL_MATRIX") return MatrixFormat::Full;
    if (f == "UPPER_ROW") return MatrixFormat::UpperRow;
    if (f == "LOWER_ROW") return MatrixFormat::LowerRow;
    if (f == "UPPER_DIAG_ROW") return MatrixFormat::UpperDiagRow;
    if (f == "LOWER_DIAG_ROW") return MatrixFormat::LowerDiagRow;
    return std::nullopt;
}

std::size_t expected_weights(MatrixFormat f, std::size_t n) {
    switch (f) {
        case MatrixFormat::Full: return n * n;
        case MatrixFormat::UpperRow:
        case MatrixFormat::LowerRow: return n * (n - 1) / 2;
        case MatrixFormat::UpperDiagRow:
        case MatrixFormat::LowerDiagRow: return n * (n + 1) / 2;
    }
    return 0;
}

std::vector<int> expand_matrix(MatrixFormat f, int n, const std::vector<long long>& w) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<int> m(un * un, 0);
    auto set = [&](int i, int j, long long v) {
        m[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = static_cast<int>(v);
        m[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = static_cast<int>(v);
    };
    std::size_t k = 0;
    switch (f) {
        case MatrixFormat::Full:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const long long v = w[k++];
                    if (i < j) set(i, j, v);
                    else if (i > j && m[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] != v)
                        throw TsplibError(TsplibError::Kind::MalformedHeader,
                                          "FULL_MATRIX is not symmetric");
                }
            break;
        case MatrixFormat::UpperRow:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) set(i, j, w[k++]);
            break;
        case MatrixFormat::LowerRow:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) set(i, j, w[k++]);
            break;
        case MatrixFormat::UpperDiagRow:
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const long long v = w[k++];
                    if (i != j) set(i, j, v);
                }
            break;
        case MatrixFormat::LowerDiagRow:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    const long long v = w[k++];
                    if (i != j) set(i, j, v);
                }
            break;
    }
    return m;
}

// Splits "KEY : VALUE" / "KEY: VALUE" / "KEY VALUE".
std::pair<std::string, std::string> split_header(const std::string& line) {
    auto colon = line.find(':');
    if (colon != std::string::npos)
        return {upper(trim(line.substr(0, colon))), trim(line.substr(colon + 1))};
    auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos) return {upper(trim(line)), {}};
    return {upper(trim(line.substr(0, sp))), trim(line.substr(sp + 1))};
}

bool starts_numeric(const std::string& s) {
    auto t = trim(s);
    if (t.empty()) return false;
    const char c = t[0];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

}  // namespace

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Euc2d: return "EUC_2D";
        case Metric::Ceil2d: return "CEIL_2D";
        case Metric::Geo: return "GEO";
        case Metric::Att: return "ATT";
        case Metric::Explicit: return "EXPLICIT";
    }
    return "?";
}

int euc_2d(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return nint(std::sqrt(dx * dx + dy * dy));
}

int ceil_2d(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return static_cast<int>(std::ceil(std::sqrt(dx * dx + dy * dy)));
}

int geo(Point a, Point b) {
    constexpr double kRadius = 6378.388;
    const double lat_a = geo_radians(a.x), lon_a = geo_radians(a.y);
    const double lat_b = geo_radians(b.x), lon_b = geo_radians(b.y);
    const double q1 = std::cos(lon_a - lon_b);
    const double q2 = std::cos(lat_a - lat_b);
    const double q3 = std::cos(lat_a + lat_b);
    return static_cast<int>(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

int att(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
    const int t = nint(r);
    return t < r ? t + 1 : t;
}

Instance Instance::from_points(std::string name, Metric metric, std::vector<Point> points,
                               std::vector<int> labels) {
    if (metric == Metric::Explicit)
        throw std::invalid_argument("explicit instances need a weight matrix");
    if (points.size() < 3) throw std::invalid_argument("an instance needs at least 3 cities");
    Instance inst;
    inst.name_ = std::move(name);
    inst.metric_ = metric;
    inst.n_ = static_cast<int>(points.size());
    inst.points_ = std::move(points);
    if (labels.empty()) {
        labels.resize(inst.points_.size());
        std::iota(labels.begin(), labels.end(), 1);
    }
    inst.labels_ = std::move(labels);
    if (inst.n_ <= kMatrixLimit) inst.tabulate();
    return inst;
}

Instance Instance::from_matrix(std::string name, int n, std::vector<int> weights,
                               std::vector<int> labels) {
    if (n < 3) throw std::invalid_argument("an instance needs at least 3 cities");
    if (weights.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::invalid_argument("weight matrix must be n*n");
    Instance inst;
    inst.name_ = std::move(name);
    inst.metric_ = Metric::Explicit;
    inst.n_ = n;
    inst.matrix_ = std::move(weights);
    for (int i = 0; i < n; ++i) inst.matrix_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 0;
    if (labels.empty()) {
        labels.resize(static_cast<std::size_t>(n));
        std::iota(labels.begin(), labels.end(), 1);
    }
    inst.labels_ = std::move(labels);
    return inst;
}

std::optional<int> Instance::city_of_label(int label) const {
    // Labels are almost always 1..n in order.
    if (label >= 1 && label <= n_ && labels_[static_cast<std::size_t>(label - 1)] == label)
        return label - 1;
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<int>(it - labels_.begin());
}

int Instance::compute(int i, int j) const {
    if (i == j) return 0;
    const Point a = points_[static_cast<std::size_t>(i)];
    const Point b = points_[static_cast<std::size_t>(j)];
    switch (metric_) {
        case Metric::Euc2d: return euc_2d(a, b);
        case Metric::Ceil2d: return ceil_2d(a, b);
        case Metric::Geo: return geo(a, b);
        case Metric::Att: return att(a, b);
        case Metric::Explicit: break;
    }
    return 0;
}

void Instance::tabulate() {
    const auto un = static_cast<std::size_t>(n_);
    std::vector<int> m(un * un, 0);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            const int d = compute(i, j);
            m[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = d;
            m[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = d;
        }
    matrix_ = std::move(m);
}

Instance parse_tsplib(std::istream& in) {
    using Kind = TsplibError::Kind;
    std::string name = "unnamed";
    std::optional<int> dimension;
    std::optional<std::string> type, weight_type, weight_format;
    std::vector<Point> points;
    std::vector<int> labels;
    std::vector<long long> weights;
    bool have_coords = false, have_weights = false;

    std::string line;
    std::string pending;  // a line read ahead by a section reader
    auto next_line = [&](std::string& out) -> bool {
        if (!pending.empty()) {
            out = std::move(pending);
            pending.clear();
            return true;
        }
        return static_cast<bool>(std::getline(in, out));
    };

    auto require_dimension = [&]() -> int {
        if (!dimension) throw TsplibError(Kind::MalformedHeader, "section before DIMENSION");
        return *dimension;
    };

    while (next_line(line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        auto [key, value] = split_header(t);
        if (key == "EOF") break;
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            type = upper(value);
        } else if (key == "COMMENT") {
        } else if (key == "DIMENSION") {
            try {
                std::size_t used = 0;
                const int d = std::stoi(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                dimension = d;
            } catch (const std::exception&) {
                throw TsplibError(Kind::MalformedHeader, "bad DIMENSION: " + value);
            }
            if (*dimension < 3) throw TsplibError(Kind::MalformedHeader, "DIMENSION must be >= 3");
        } else if (key == "EDGE_WEIGHT_TYPE") {
            weight_type = upper(value);
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            weight_format = upper(value);
        } else if (key == "NODE_COORD_TYPE" || key == "DISPLAY_DATA_TYPE" || key == "CAPACITY") {
        } else if (key == "NODE_COORD_SECTION") {
            const int n = require_dimension();
            points.reserve(static_cast<std::size_t>(n));
            while (next_line(line)) {
                if (!starts_numeric(line)) {
                    if (!trim(line).empty()) pending = line;
                    if (trim(line).empty()) continue;
                    break;
                }
                std::istringstream ls(line);
                long long id;
                double x, y;
                if (!(ls >> id >> x >> y))
                    throw TsplibError(Kind::MalformedHeader, "bad coordinate line: " + line);
                labels.push_back(static_cast<int>(id));
                points.push_back({x, y});
            }
            if (static_cast<int>(points.size()) != n)
                throw TsplibError(Kind::DimensionMismatch,
                                  "DIMENSION " + std::to_string(n) + " but " +
                                      std::to_string(points.size()) + " coordinates");
            have_coords = true;
        } else if (key == "EDGE_WEIGHT_SECTION") {
            require_dimension();
            while (next_line(line)) {
                if (!starts_numeric(line)) {
                    if (trim(line).empty()) continue;
                    pending = line;
                    break;
                }
                std::istringstream ls(line);
                long long v;
                while (ls >> v) weights.push_back(v);
            }
            have_weights = true;
        } else if (key == "DISPLAY_DATA_SECTION" || key == "FIXED_EDGES_SECTION") {
            while (next_line(line)) {
                if (!starts_numeric(line)) {
                    if (trim(line).empty()) continue;
                    pending = line;
                    break;
                }
            }
        } else {
            throw TsplibError(Kind::MalformedHeader, "unknown keyword: " + key);
        }
    }

    if (!type || type->rfind("TSP", 0) != 0 || *type != "TSP")
        throw TsplibError(Kind::MalformedHeader, "TYPE must be TSP");
    if (!dimension) throw TsplibError(Kind::MalformedHeader, "missing DIMENSION");
    if (!weight_type) throw TsplibError(Kind::MalformedHeader, "missing EDGE_WEIGHT_TYPE");

    const int n = *dimension;
    Instance inst = [&]() {
        if (*weight_type == "EXPLICIT") {
            const auto fmt = parse_format(weight_format.value_or(""));
            if (!fmt)
                throw TsplibError(Kind::UnsupportedMetric,
                                  "unsupported EDGE_WEIGHT_FORMAT: " + weight_format.value_or("<none>"));
            if (!have_weights) throw TsplibError(Kind::MalformedHeader, "missing EDGE_WEIGHT_SECTION");
            if (weights.size() != expected_weights(*fmt, static_cast<std::size_t>(n)))
                throw TsplibError(Kind::DimensionMismatch,
                                  "EDGE_WEIGHT_SECTION has " + std::to_string(weights.size()) +
                                      " entries for DIMENSION " + std::to_string(n));
            std::vector<int> lbl;
            if (have_coords) lbl = labels;
            return Instance::from_matrix(name, n, expand_matrix(*fmt, n, weights), std::move(lbl));
        }
        Metric metric;
        if (*weight_type == "EUC_2D") metric = Metric::Euc2d;
        else if (*weight_type == "CEIL_2D") metric = Metric::Ceil2d;
        else if (*weight_type == "GEO") metric = Metric::Geo;
        else if (*weight_type == "ATT") metric = Metric::Att;
        else throw TsplibError(Kind::UnsupportedMetric, "unsupported EDGE_WEIGHT_TYPE: " + *weight_type);
        if (!have_coords) throw TsplibError(Kind::MalformedHeader, "missing NODE_COORD_SECTION");
        return Instance::from_points(name, metric, std::move(points), std::move(labels));
    }();
    return inst;
}

Instance load_tsplib(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_tsplib(in);
}

std::vector<int> parse_tour(std::istream& in, const Instance& inst) {
    using Kind = TsplibError::Kind;
    std::string line;
    bool in_section = false;
    std::vector<int> order;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        if (!in_section) {
            auto [key, value] = split_header(t);
            if (key == "TOUR_SECTION") in_section = true;
            else if (key == "TYPE" && upper(value) != "TOUR")
                throw TsplibError(Kind::MalformedHeader, "TYPE must be TOUR");
            else if (key == "DIMENSION" && std::stoi(value) != inst.size())
                throw TsplibError(Kind::DimensionMismatch, "tour DIMENSION differs from instance");
            else if (key == "EOF") break;
            continue;
        }
        std::istringstream ls(t);
        long long v;
        bool done = false;
        while (ls >> v) {
            if (v == -1) {
                done = true;
                break;
            }
            auto c = inst.city_of_label(static_cast<int>(v));
            if (!c) throw TsplibError(Kind::InvalidTour, "unknown city label " + std::to_string(v));
            order.push_back(*c);
        }
        if (done) break;
    }
    if (static_cast<int>(order.size()) != inst.size())
        throw TsplibError(Kind::DimensionMismatch, "tour has " + std::to_string(order.size()) + " cities");
    std::vector<char> seen(order.size(), 0);
    for (int c : order) {
        if (seen[static_cast<std::size_t>(c)]) throw TsplibError(Kind::InvalidTour, "duplicate city in tour");
        seen[static_cast<std::size_t>(c)] = 1;
    }
    return order;
}

std::vector<int> load_tour(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_tour(in, inst);
}

void write_tour(const Instance& inst, std::span<const int> order, std::ostream& out) {
    const int n = inst.size();
    if (static_cast<int>(order.size()) != n)
        throw TsplibError(TsplibError::Kind::InvalidTour, "tour size differs from instance");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::size_t start = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int c = order[k];
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)])
            throw TsplibError(TsplibError::Kind::InvalidTour, "tour is not a permutation");
        seen[static_cast<std::size_t>(c)] = 1;
        if (c == 0) start = k;
    }
    out << "NAME : " << inst.name() << ".tour\n";
    out << "TYPE : TOUR\n";
    out << "DIMENSION : " << n << "\n";
    out << "TOUR_SECTION\n";
    for (std::size_t k = 0; k < order.size(); ++k)
        out << inst.label(order[(start + k) % order.size()]) << "\n";
    out << "-1\nEOF\n";
}

std::map<std::string, Length> parse_bks_catalog(std::istream& in) {
    std::map<std::string, Length> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string name;
        Length value;
        if (!(ls >> name)) continue;
        if (!(ls >> value)) throw std::runtime_error("bad BKS catalog line: " + line);
        out[name] = value;
    }
    return out;
}

std::map<std::string, Length> load_bks_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_bks_catalog(in);
}

namespace {

std::vector<std::vector<int>> brute_force_neighbors(const Instance& inst, int k) {
    const int n = inst.size();
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    std::vector<std::pair<int, int>> row;
    row.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        row.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) row.emplace_back(inst.distance(i, j), j);
        const auto take = static_cast<std::size_t>(std::min<int>(k, n - 1));
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(take), row.end());
        auto& o = out[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < take; ++t) o.push_back(row[t].second);
    }
    return out;
}

std::vector<std::vector<int>> grid_neighbors(const Instance& inst, int k) {
    const int n = inst.size();
    const auto pts = inst.points();
    double minx = std::numeric_limits<double>::max(), miny = minx;
    double maxx = std::numeric_limits<double>::lowest(), maxy = maxx;
    for (const auto& p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double w = std::max(maxx - minx, 1e-9), h = std::max(maxy - miny, 1e-9);
    const int side = std::max(1, static_cast<int>(std::sqrt(n / 2.0)));
    const double cw = w / side, ch = h / side;
    auto cell_of = [&](const Point& p) {
        int cx = std::min(side - 1, static_cast<int>((p.x - minx) / cw));
        int cy = std::min(side - 1, static_cast<int>((p.y - miny) / ch));
        return std::pair{cx, cy};
    };
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(side * side));
    for (int i = 0; i < n; ++i) {
        auto [cx, cy] = cell_of(pts[static_cast<std::size_t>(i)]);
        cells[static_cast<std::size_t>(cy * side + cx)].push_back(i);
    }
    const int want = std::min(k, n - 1);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    std::vector<std::pair<double, int>> found;
    for (int i = 0; i < n; ++i) {
        const Point p = pts[static_cast<std::size_t>(i)];
        auto [cx, cy] = cell_of(p);
        found.clear();
        for (int r = 0;; ++r) {
            for (int y = cy - r; y <= cy + r; ++y) {
                if (y < 0 || y >= side) continue;
                for (int x = cx - r; x <= cx + r; ++x) {
                    if (x < 0 || x >= side) continue;
                    if (std::max(std::abs(x - cx), std::abs(y - cy)) != r) continue;
                    for (int j : cells[static_cast<std::size_t>(y * side + x)]) {
                        if (j == i) continue;
                        const double dx = pts[static_cast<std::size_t>(j)].x - p.x;
                        const double dy = pts[static_cast<std::size_t>(j)].y - p.y;
                        found.emplace_back(dx * dx + dy * dy, j);
                    }
                }
            }
            if (static_cast<int>(found.size()) >= want) {
                // Everything within r*min(cw,ch) of p has been scanned.
                std::nth_element(found.begin(), found.begin() + (want - 1), found.end());
                const double kth = found[static_cast<std::size_t>(want - 1)].first;
                const double reach = r * std::min(cw, ch);
                if (kth <= reach * reach || r > 2 * side) break;
            }
            if (r > 2 * side) break;
        }
        std::vector<std::pair<int, int>> ranked;
        ranked.reserve(found.size());
        for (auto& [d2, j] : found) ranked.emplace_back(inst.distance(i, j), j);
        std::sort(ranked.begin(), ranked.end());
        auto& o = out[static_cast<std::size_t>(i)];
        for (int t = 0; t < want; ++t) o.push_back(ranked[static_cast<std::size_t>(t)].second);
    }
    return out;
}

}  // namespace

std::vector<std::vector<int>> nearest_neighbors(const Instance& inst, int k) {
    const bool planar = inst.has_points() && inst.metric() != Metric::Geo;
    if (!planar || inst.size() <= Instance::kMatrixLimit) return brute_force_neighbors(inst, k);
    return grid_neighbors(inst, k);
}

}  // namespace rhga
