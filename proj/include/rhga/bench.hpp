#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhga/instance.hpp"
#include "rhga/solver.hpp"

namespace rhga {

/// 100 (result - bks) / bks.
double gap_percent(Length result, Length bks);

struct ManifestEntry {
    std::string path;
    std::optional<Length> bks;  // overrides the catalog
};

/// One instance path per line, optionally followed by a BKS override.
/// Blank lines and '#' comments are ignored.
std::vector<ManifestEntry> parse_manifest(std::istream& in);
std::vector<ManifestEntry> load_manifest(const std::string& path);

struct RunRow {
    std::string instance;
    std::string variant;
    std::uint64_t seed = 0;
    Length best_length = 0;
    std::optional<Length> bks;
    std::optional<double> gap;
    int generations = 0;
    long q_lkh_calls = 0;
    double wall_time = 0.0;

    bool operator==(const RunRow&) const = default;
};

/// Summary of all seeds of one (instance, variant).
struct CellSummary {
    std::string instance;
    std::string variant;
    int runs = 0;
    Length best = 0;
    double average = 0.0;
    std::optional<double> gap_best;
    std::optional<double> gap_average;
    double mean_time = 0.0;

    bool operator==(const CellSummary&) const = default;
};

struct CumulativePoint {
    std::string instance;
    double gap = 0.0;   // running sum of average gaps
    double time = 0.0;  // running sum of mean run times

    bool operator==(const CumulativePoint&) const = default;
};

struct VariantSummary {
    std::string variant;
    std::optional<double> mean_gap_best;  // over instances with a BKS
    std::optional<double> mean_gap_average;
    std::vector<CumulativePoint> cumulative;  // manifest order

    bool operator==(const VariantSummary&) const = default;
};

struct BenchReport {
    std::vector<CellSummary> cells;  // manifest order, then variant order
    std::vector<VariantSummary> variants;

    bool operator==(const BenchReport&) const = default;
};

/// Instances and variants appear in first-seen order of the rows.
BenchReport aggregate(const std::vector<RunRow>& rows);

nlohmann::json to_json(const RunRow& row);
RunRow row_from_json(const nlohmann::json& j);
nlohmann::json rows_to_json(const std::vector<RunRow>& rows);
std::vector<RunRow> rows_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchReport& report);

/// CSV mirror of the rows without wall time, so equal runs give equal bytes.
void write_csv(const std::vector<RunRow>& rows, std::ostream& out);

struct BenchOptions {
    std::vector<ManifestEntry> manifest;
    std::vector<Variant> variants{Variant::Rhga};
    int runs = 10;
    std::uint64_t first_seed = 1;  // run r uses first_seed + r
    int jobs = 1;
    bool stop_at_bks = true;  // pass the BKS as the known optimum
    SolverConfig base;
    std::map<std::string, Length> catalog;
    std::function<void(const std::string&)> warn;
    std::function<void(const RunRow&)> on_row;
};

struct BenchOutcome {
    std::vector<RunRow> rows;  // manifest, variant, seed order
    int failed_instances = 0;
};

BenchOutcome run_bench(const BenchOptions& opts);

/// Row for a finished run.
RunRow make_row(const Instance& inst, Variant v, std::uint64_t seed, const RunResult& r);

/// JSON document written by the solve command.
nlohmann::json solve_json(const Instance& inst, Variant v, std::uint64_t seed, const RunResult& r);

}  // namespace rhga
