#include "rhga/cli.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "rhga/bench.hpp"
#include "rhga/oracle.hpp"
#include "rhga/solver.hpp"

#ifndef RHGA_DATA_DIR
#define RHGA_DATA_DIR "data"
#endif

namespace rhga {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverFlags {
    int n_pop = 300;
    int n_ch = 30;
    int k_max = 5;
    double lambda = 0.1;
    double gamma = 0.9;
    std::string m_gen = "auto";
    double time_limit = 0.0;
    int special_count = 1;
    std::string bks_path;
};

void add_solver_flags(CLI::App& app, SolverFlags& f) {
    app.add_option("--npop", f.n_pop, "population size")->capture_default_str();
    app.add_option("--nch", f.n_ch, "offspring per crossover")->capture_default_str();
    app.add_option("--kmax", f.k_max, "deepest k-opt move")->capture_default_str();
    app.add_option("--lambda", f.lambda, "learning rate")->capture_default_str();
    app.add_option("--gamma", f.gamma, "discount factor")->capture_default_str();
    app.add_option("--mgen", f.m_gen, "generations before Case 3 fires: N or auto")->capture_default_str();
    app.add_option("--time-limit", f.time_limit, "seconds per run (0: none)");
    app.add_option("--specials", f.special_count, "special individuals for rhga-k")->capture_default_str();
    app.add_option("--bks", f.bks_path, "best-known catalog (name length per line)");
}

SolverConfig make_config(const SolverFlags& f) {
    SolverConfig cfg;
    cfg.n_pop = f.n_pop;
    cfg.n_ch = f.n_ch;
    cfg.k_max = f.k_max;
    cfg.lambda = f.lambda;
    cfg.gamma = f.gamma;
    cfg.special_count = f.special_count;
    if (f.m_gen != "auto") {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(f.m_gen, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != f.m_gen.size()) throw UsageError("--mgen expects an integer or 'auto'");
        cfg.m_gen = v;
    }
    if (f.time_limit < 0) throw UsageError("--time-limit must be non-negative");
    if (f.time_limit > 0) cfg.time_limit = f.time_limit;
    return cfg;
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw UsageError(what + " not found: " + path);
}

std::map<std::string, Length> catalog(const std::string& path) {
    if (!path.empty()) {
        require_file(path, "BKS catalog");
        return load_bks_catalog(path);
    }
    const std::string fallback = std::string(RHGA_DATA_DIR) + "/bks.txt";
    if (fs::exists(fallback)) return load_bks_catalog(fallback);
    return {};
}

Variant variant_or_throw(const std::string& name) {
    const auto v = parse_variant(name);
    if (!v) throw UsageError("unknown variant '" + name + "'");
    return *v;
}

void write_file(const std::string& path, const std::string& what, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + what + " to " + path);
    fn(out);
}

int solve(const std::string& instance_path, std::uint64_t seed, const std::string& variant_name,
          const std::string& opt_flag, const SolverFlags& flags, const std::string& tour_out,
          const std::string& json_out, const std::string& qdump, bool oracle, std::ostream& out) {
    const Variant variant = variant_or_throw(variant_name);
    SolverConfig cfg = make_config(flags);
    cfg.variant = variant;
    cfg.seed = seed;
    require_file(instance_path, "instance");
    Instance inst = load_tsplib(instance_path);
    if (const auto cat = catalog(flags.bks_path); cat.count(inst.name())) inst.set_bks(cat.at(inst.name()));

    if (opt_flag == "bks") {
        if (!inst.bks()) throw UsageError("--opt bks: no best-known length for " + inst.name());
        cfg.opt = inst.bks();
    } else if (opt_flag != "none") {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(opt_flag, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != opt_flag.size() || v <= 0) throw UsageError("--opt expects N, 'bks' or 'none'");
        cfg.opt = v;
    }
    cfg.validate();

    RunResult res;
    QTable table;
    if (oracle) {
        const auto t0 = std::chrono::steady_clock::now();
        ExactResult ex = exact_dp(inst);
        res.best_tour = ex.optimal_tour;
        res.best_length = ex.optimal_length;
        res.trace.emplace_back(0, ex.optimal_length);
        res.reached_opt = true;
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        // The exact optimum is the reference when no catalog value exists.
        if (!inst.bks()) inst.set_bks(ex.optimal_length);
    } else {
        const Prepared prep = prepare(inst, cfg.candidates);
        res = rhga_run(inst, cfg, prep, qdump.empty() ? nullptr : &table);
    }

    const auto doc = solve_json(inst, variant, seed, res);
    if (!json_out.empty()) write_file(json_out, "JSON", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    if (!tour_out.empty())
        write_file(tour_out, "tour", [&](std::ostream& o) { write_tour(inst, res.best_tour.order(), o); });
    if (!qdump.empty()) {
        if (oracle) throw UsageError("--qdump needs a solver run, not --oracle");
        write_file(qdump, "Q table", [&](std::ostream& o) { table.dump(inst, o); });
    }
    out << inst.name() << ' ' << to_string(variant) << " best " << res.best_length;
    if (inst.bks()) out << " gap " << std::fixed << std::setprecision(4) << gap_percent(res.best_length, *inst.bks())
                        << std::defaultfloat << '%';
    out << " generations " << res.generations << " q_lkh " << res.q_lkh_calls << " time " << res.wall_time
        << "s\n";
    return 0;
}

int bench(const std::string& manifest_path, int runs, const std::vector<std::string>& variant_names,
          const std::string& out_dir, int jobs, std::uint64_t seed, bool stop_at_bks, const SolverFlags& flags,
          std::ostream& out, std::ostream& err) {
    if (runs < 1) throw UsageError("--runs must be at least 1");
    if (jobs < 1) throw UsageError("--jobs must be at least 1");
    BenchOptions opts;
    opts.base = make_config(flags);
    opts.base.validate();
    opts.runs = runs;
    opts.jobs = jobs;
    opts.first_seed = seed;
    opts.stop_at_bks = stop_at_bks;
    opts.variants.clear();
    for (const auto& name : variant_names) opts.variants.push_back(variant_or_throw(name));
    if (opts.variants.empty()) throw UsageError("--variants is empty");
    try {
        opts.manifest = load_manifest(manifest_path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    opts.catalog = catalog(flags.bks_path);
    opts.warn = [&](const std::string& m) { err << "warning: " << m << '\n'; };
    opts.on_row = [&](const RunRow& r) {
        out << r.instance << ' ' << r.variant << " seed " << r.seed << " best " << r.best_length << '\n';
    };

    fs::create_directories(out_dir);
    BenchOutcome res;
    try {
        res = run_bench(opts);
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    const BenchReport rep = aggregate(res.rows);
    write_file((fs::path(out_dir) / "rows.json").string(), "rows",
               [&](std::ostream& o) { o << rows_to_json(res.rows).dump(2) << '\n'; });
    write_file((fs::path(out_dir) / "rows.csv").string(), "rows", [&](std::ostream& o) { write_csv(res.rows, o); });
    write_file((fs::path(out_dir) / "report.json").string(), "report",
               [&](std::ostream& o) { o << to_json(rep).dump(2) << '\n'; });
    for (const auto& v : rep.variants) {
        out << v.variant << ": mean gap of best ";
        if (v.mean_gap_best) out << std::fixed << std::setprecision(4) << *v.mean_gap_best << std::defaultfloat << '%';
        else out << "n/a";
        out << ", mean gap of average ";
        if (v.mean_gap_average)
            out << std::fixed << std::setprecision(4) << *v.mean_gap_average << std::defaultfloat << '%';
        else out << "n/a";
        out << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetric TSP solver: EAX with a Q-learned k-opt local search", "rhga"};
    app.require_subcommand(1);

    SolverFlags solve_flags;
    std::string instance, variant = "rhga", opt = "none", tour_out, json_out, qdump;
    std::uint64_t seed = 1;
    bool oracle = false;
    auto* s = app.add_subcommand("solve", "solve one instance");
    s->add_option("--instance", instance, "TSPLIB file")->required();
    s->add_option("--seed", seed, "random seed")->capture_default_str();
    s->add_option("--variant", variant, "algorithm variant")->capture_default_str();
    s->add_option("--opt", opt, "stop at this length: N, bks or none")->capture_default_str();
    s->add_option("--tour-out", tour_out, "write the best tour (TSPLIB TOUR)");
    s->add_option("--json-out", json_out, "write the result as JSON");
    s->add_option("--qdump", qdump, "write the final Q table");
    s->add_flag("--oracle", oracle, "solve exactly by dynamic programming (n <= 18)");
    add_solver_flags(*s, solve_flags);

    SolverFlags bench_flags;
    std::string manifest, out_dir = "bench_out";
    std::vector<std::string> variants{"rhga"};
    int runs = 10, jobs = 1;
    std::uint64_t bench_seed = 1;
    bool no_stop = false;
    auto* b = app.add_subcommand("bench", "run a benchmark grid");
    b->add_option("--manifest", manifest, "instance list")->required();
    b->add_option("--runs", runs, "runs per instance and variant")->capture_default_str();
    b->add_option("--variants", variants, "comma-separated variant list")->delimiter(',')->capture_default_str();
    b->add_option("--out", out_dir, "output directory")->capture_default_str();
    b->add_option("--jobs", jobs, "parallel runs")->capture_default_str();
    b->add_option("--seed", bench_seed, "seed of the first run")->capture_default_str();
    b->add_flag("--no-stop-at-bks", no_stop, "keep running after reaching the best-known length");
    add_solver_flags(*b, bench_flags);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "rhga: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*s)
            return solve(instance, seed, variant, opt, solve_flags, tour_out, json_out, qdump, oracle, out);
        return bench(manifest, runs, variants, out_dir, jobs, bench_seed, !no_stop, bench_flags, out, err);
    } catch (const UsageError& e) {
        err << "rhga: " << e.what() << '\n';
        return 2;
    } catch (const TsplibError& e) {
        err << "rhga: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "rhga: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "rhga: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace rhga
