#include "rhga/bench.hpp"

#include <atomic>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rhga {

using nlohmann::json;

double gap_percent(Length result, Length bks) {
    return 100.0 * static_cast<double>(result - bks) / static_cast<double>(bks);
}

std::vector<ManifestEntry> parse_manifest(std::istream& in) {
    std::vector<ManifestEntry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        ManifestEntry e;
        if (!(ls >> e.path)) continue;
        std::string extra;
        if (ls >> extra) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(extra, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != extra.size() || v <= 0)
                throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": bad BKS '" + extra + "'");
            e.bks = v;
            if (ls >> extra)
                throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": trailing text");
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path);
    return parse_manifest(in);
}

BenchReport aggregate(const std::vector<RunRow>& rows) {
    std::vector<std::string> instances, variants;
    auto index_of = [](std::vector<std::string>& list, const std::string& s) {
        for (std::size_t i = 0; i < list.size(); ++i)
            if (list[i] == s) return i;
        list.push_back(s);
        return list.size() - 1;
    };
    struct Acc {
        int runs = 0;
        Length best = 0;
        long double sum = 0;
        double time = 0;
        std::optional<Length> bks;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
    for (const auto& r : rows) {
        const auto i = index_of(instances, r.instance);
        const auto v = index_of(variants, r.variant);
        Acc& a = acc[{i, v}];
        a.best = a.runs == 0 ? r.best_length : std::min(a.best, r.best_length);
        ++a.runs;
        a.sum += static_cast<long double>(r.best_length);
        a.time += r.wall_time;
        if (r.bks) a.bks = r.bks;
    }

    BenchReport rep;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t v = 0; v < variants.size(); ++v) {
            const auto it = acc.find({i, v});
            if (it == acc.end()) continue;
            const Acc& a = it->second;
            CellSummary c;
            c.instance = instances[i];
            c.variant = variants[v];
            c.runs = a.runs;
            c.best = a.best;
            c.average = static_cast<double>(a.sum / a.runs);
            c.mean_time = a.time / a.runs;
            if (a.bks) {
                c.gap_best = gap_percent(a.best, *a.bks);
                c.gap_average = 100.0 * (c.average - static_cast<double>(*a.bks)) / static_cast<double>(*a.bks);
            }
            rep.cells.push_back(std::move(c));
        }

    for (const auto& name : variants) {
        VariantSummary s;
        s.variant = name;
        double gap_sum = 0, time_sum = 0, best_sum = 0;
        int with_bks = 0;
        for (const auto& c : rep.cells) {
            if (c.variant != name) continue;
            if (c.gap_average) {
                gap_sum += *c.gap_average;
                best_sum += *c.gap_best;
                ++with_bks;
            }
            time_sum += c.mean_time;
            s.cumulative.push_back({c.instance, gap_sum, time_sum});
        }
        if (with_bks > 0) {
            s.mean_gap_best = best_sum / with_bks;
            s.mean_gap_average = gap_sum / with_bks;
        }
        rep.variants.push_back(std::move(s));
    }
    return rep;
}

namespace {

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

json to_json(const RunRow& r) {
    return json{{"instance", r.instance},       {"variant", r.variant},
                {"seed", r.seed},               {"best_length", r.best_length},
                {"bks", opt_json(r.bks)},       {"gap_percent", opt_json(r.gap)},
                {"generations", r.generations}, {"q_lkh_calls", r.q_lkh_calls},
                {"wall_time_s", r.wall_time}};
}

RunRow row_from_json(const json& j) {
    RunRow r;
    r.instance = j.at("instance").get<std::string>();
    r.variant = j.at("variant").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best_length = j.at("best_length").get<Length>();
    r.bks = opt_from<Length>(j, "bks");
    r.gap = opt_from<double>(j, "gap_percent");
    r.generations = j.at("generations").get<int>();
    r.q_lkh_calls = j.at("q_lkh_calls").get<long>();
    r.wall_time = j.at("wall_time_s").get<double>();
    return r;
}

json rows_to_json(const std::vector<RunRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr;
}

std::vector<RunRow> rows_from_json(const json& j) {
    std::vector<RunRow> rows;
    for (const auto& e : j) rows.push_back(row_from_json(e));
    return rows;
}

json to_json(const BenchReport& rep) {
    json cells = json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"instance", c.instance},
                         {"variant", c.variant},
                         {"runs", c.runs},
                         {"best", c.best},
                         {"average", c.average},
                         {"gap_best_percent", opt_json(c.gap_best)},
                         {"gap_average_percent", opt_json(c.gap_average)},
                         {"mean_time_s", c.mean_time}});
    json vars = json::array();
    for (const auto& v : rep.variants) {
        json cum = json::array();
        for (const auto& p : v.cumulative)
            cum.push_back({{"instance", p.instance}, {"gap_percent", p.gap}, {"time_s", p.time}});
        vars.push_back({{"variant", v.variant},
                        {"mean_gap_best_percent", opt_json(v.mean_gap_best)},
                        {"mean_gap_average_percent", opt_json(v.mean_gap_average)},
                        {"cumulative", cum}});
    }
    return json{{"cells", cells}, {"variants", vars}};
}

void write_csv(const std::vector<RunRow>& rows, std::ostream& out) {
    out << "instance,variant,seed,best_length,bks,gap_percent,generations,q_lkh_calls\n";
    for (const auto& r : rows) {
        out << r.instance << ',' << r.variant << ',' << r.seed << ',' << r.best_length << ',';
        if (r.bks) out << *r.bks;
        out << ',';
        if (r.gap) out << std::fixed << std::setprecision(4) << *r.gap << std::defaultfloat;
        out << ',' << r.generations << ',' << r.q_lkh_calls << '\n';
    }
}

RunRow make_row(const Instance& inst, Variant v, std::uint64_t seed, const RunResult& res) {
    RunRow r;
    r.instance = inst.name();
    r.variant = to_string(v);
    r.seed = seed;
    r.best_length = res.best_length;
    r.bks = inst.bks();
    if (r.bks) r.gap = gap_percent(res.best_length, *r.bks);
    r.generations = res.generations;
    r.q_lkh_calls = res.q_lkh_calls;
    r.wall_time = res.wall_time;
    return r;
}

json solve_json(const Instance& inst, Variant v, std::uint64_t seed, const RunResult& r) {
    json trace = json::array();
    for (const auto& [g, l] : r.trace) trace.push_back({g, l});
    const RunRow row = make_row(inst, v, seed, r);
    return json{{"instance", row.instance},
                {"variant", row.variant},
                {"seed", seed},
                {"best_length", r.best_length},
                {"gap_percent", opt_json(row.gap)},
                {"generations", r.generations},
                {"q_lkh_calls", r.q_lkh_calls},
                {"wall_time_s", r.wall_time},
                {"time_limit_exceeded", r.time_limit_exceeded},
                {"trace", trace}};
}

BenchOutcome run_bench(const BenchOptions& opts) {
    struct Loaded {
        std::unique_ptr<Instance> inst;
        std::unique_ptr<Prepared> prep;
        std::once_flag prepared;
    };
    std::vector<std::unique_ptr<Loaded>> loaded;
    BenchOutcome out;
    for (const auto& e : opts.manifest) {
        auto l = std::make_unique<Loaded>();
        try {
            l->inst = std::make_unique<Instance>(load_tsplib(e.path));
        } catch (const std::exception& ex) {
            if (opts.warn) opts.warn("skipping " + e.path + ": " + ex.what());
            ++out.failed_instances;
            continue;
        }
        if (e.bks) {
            l->inst->set_bks(e.bks);
        } else if (const auto it = opts.catalog.find(l->inst->name()); it != opts.catalog.end()) {
            l->inst->set_bks(it->second);
        }
        loaded.push_back(std::move(l));
    }
    if (!opts.manifest.empty() && loaded.empty()) throw std::runtime_error("no readable instance in the manifest");

    struct Cell {
        Loaded* inst;
        Variant variant;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (auto& l : loaded)
        for (Variant v : opts.variants)
            for (int r = 0; r < opts.runs; ++r)
                cells.push_back({l.get(), v, opts.first_seed + static_cast<std::uint64_t>(r)});
    out.rows.resize(cells.size());

    std::atomic<std::size_t> next{0};
    std::mutex report;
    std::exception_ptr error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            try {
                std::call_once(c.inst->prepared, [&] {
                    c.inst->prep = std::make_unique<Prepared>(prepare(*c.inst->inst, opts.base.candidates));
                });
                SolverConfig cfg = opts.base;
                cfg.variant = c.variant;
                cfg.seed = c.seed;
                cfg.metric_mode.reset();
                if (opts.stop_at_bks && c.inst->inst->bks()) cfg.opt = c.inst->inst->bks();
                const RunResult res = rhga_run(*c.inst->inst, cfg, *c.inst->prep);
                out.rows[i] = make_row(*c.inst->inst, c.variant, c.seed, res);
                if (opts.on_row) {
                    std::lock_guard lock(report);
                    opts.on_row(out.rows[i]);
                }
            } catch (...) {
                std::lock_guard lock(report);
                if (!error) error = std::current_exception();
                next = cells.size();
                return;
            }
        }
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace rhga
