// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 2 4 8      run a subset
//
// The benchmark criterion needs pr1002.tsp and u1060.tsp; they are looked up
// in $RHGA_TSPLIB_DIR, tests/data and data, and the criterion prints FAIL with
// the reason when they are absent. The exit status reflects criteria 1-4 and 8.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rhga/bench.hpp"
#include "rhga/eax.hpp"
#include "rhga/lk_search.hpp"
#include "rhga/one_tree.hpp"
#include "rhga/oracle.hpp"
#include "rhga/q_table.hpp"
#include "rhga/solver.hpp"
#include "support.hpp"

using namespace rhga;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Status { Pass, Fail, Unavailable };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome pass(std::string d) { return {Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::Fail, std::move(d)}; }

template <class... Ts>
std::string cat(const Ts&... xs) {
    std::ostringstream s;
    s << std::setprecision(10);
    (s << ... << xs);
    return s.str();
}

// Random EUC_2D instance with n drawn from [lo, hi].
Instance random_small(std::uint64_t seed, int lo, int hi) {
    Rng rng(seed);
    const int n = lo + rand_below(rng, hi - lo + 1);
    return test::random_euc(n, seed * 7919 + 13);
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    int exact = 0;
    std::string first_miss;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Instance inst = random_small(1000 + s, 5, 10);
        const Length opt = exact_dp(inst).optimal_length;
        SolverConfig cfg;
        cfg.seed = s;
        cfg.opt = opt;
        const RunResult r = rhga_run(inst, cfg);
        const bool ok = r.best_length == opt && !validate_tour(r.best_tour, inst.size()) &&
                        tour_length(inst, r.best_tour.order()) == opt;
        exact += ok;
        if (!ok && first_miss.empty()) first_miss = cat(" first miss: ", inst.name(), " got ", r.best_length, " opt ", opt);
    }
    const double t = seconds_since(t0);
    const std::string d = cat(exact, "/200 exact in ", std::fixed, std::setprecision(1), t, " s", first_miss);
    return exact == 200 && t < 120.0 ? pass(d) : fail(d);
}

// The 50 instances shared by the alpha and bound criteria.
std::vector<Instance> small_family() {
    std::vector<Instance> out;
    for (std::uint64_t s = 0; s < 50; ++s) out.push_back(random_small(5000 + s, 5, 12));
    return out;
}

Outcome alpha_correctness() {
    double worst = 0.0;
    long pairs = 0;
    int bad_tree = 0, negative = 0;
    for (const Instance& inst : small_family()) {
        const int n = inst.size();
        const AscentResult asc = ascend_penalties(inst);
        for (const std::vector<double>& pi : {std::vector<double>(static_cast<std::size_t>(n), 0.0), asc.pi}) {
            const OneTree tree = minimum_one_tree(inst, pi);
            const auto alpha = alpha_values(inst, pi, n - 1);
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(alpha[static_cast<std::size_t>(i)].size()) != n - 1) return fail("short alpha list");
                for (const AlphaEntry& e : alpha[static_cast<std::size_t>(i)]) {
                    const double ref = definitional_alpha(inst, pi, i, e.city);
                    worst = std::max(worst, std::abs(ref - e.alpha));
                    negative += e.alpha < 0.0;
                    if (tree.contains(i, e.city)) bad_tree += e.alpha != 0.0;
                    ++pairs;
                }
            }
        }
    }
    const std::string d = cat(pairs, " pairs, max |diff| ", worst, ", nonzero tree alpha ", bad_tree, ", negative ",
                              negative);
    return worst <= 1e-9 && bad_tree == 0 && negative == 0 ? pass(d) : fail(d);
}

Outcome bound_dominance() {
    int violations = 0;
    double tightest = 1e300;
    for (const Instance& inst : small_family()) {
        const AscentResult asc = ascend_penalties(inst);
        const double opt = static_cast<double>(exact_dp(inst).optimal_length);
        const double plain = minimum_one_tree(inst, {}).length;
        if (asc.bound > opt + 1e-9 || asc.bound < plain - 1e-9) ++violations;
        tightest = std::min(tightest, opt - asc.bound);
    }
    const std::string d = cat("50 instances, violations ", violations, ", min(opt - bound) ", tightest);
    return violations == 0 ? pass(d) : fail(d);
}

Outcome q_arithmetic() {
    // d(0,1) = 10, d(1,2) = 4: reward 6 on the pair (1,2); best successor value 2.0.
    const Instance four =
        Instance::from_matrix("four", 4, {0, 10, 7, 7, 10, 0, 4, 7, 7, 4, 0, 7, 7, 7, 7, 0});
    QTable qt(std::vector<std::vector<QEntry>>{
        {{1, 1.0}, {2, 1.0}, {3, 1.0}},
        {{0, 1.0}, {2, 1.0}, {3, 1.0}},
        {{0, 1.0}, {1, 1.0}, {3, 1.0}},
        {{0, 2.0}, {1, 1.0}, {2, 1.0}},
    });
    qt.update(four, std::vector<int>{0, 1, 2, 3}, 0.1, 0.9);
    const double err = std::abs(qt.q(1, 2) - 1.68);

    // Contraction: values stay inside [min(q0, -R/(1-g)), max(q0, R/(1-g))].
    const int n = 10;
    const Instance inst = test::random_euc(n, 42);
    Rng rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<std::vector<QEntry>> lists(static_cast<std::size_t>(n));
    double q_lo = 1e300, q_hi = -1e300;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                const double q = u(rng);
                q_lo = std::min(q_lo, q);
                q_hi = std::max(q_hi, q);
                lists[static_cast<std::size_t>(i)].push_back({j, q});
            }
    QTable fz(std::move(lists));
    double R = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                R = std::max(R, std::abs(static_cast<double>(inst.distance(i, j) - inst.distance(j, k))));
    const double gamma = 0.9;
    const double lo = std::min(q_lo, -R / (1 - gamma)), hi = std::max(q_hi, R / (1 - gamma));
    int escapes = 0;
    for (int step = 0; step < 1000; ++step) {
        std::vector<int> p = test::identity(n);
        std::shuffle(p.begin(), p.end(), rng);
        p.resize(static_cast<std::size_t>(2 * (2 + rand_below(rng, 4))));
        fz.update(inst, p, 0.1, gamma);
        for (int i = 0; i < n; ++i)
            for (const QEntry& e : fz.list(i)) escapes += e.q < lo || e.q > hi;
    }
    const std::string d = cat("|q - 1.68| = ", err, ", bound escapes over 1000 steps ", escapes);
    return err <= 1e-12 && escapes == 0 ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------

std::optional<fs::path> find_instance(const std::string& name) {
    std::vector<fs::path> dirs;
    if (const char* env = std::getenv("RHGA_TSPLIB_DIR")) dirs.emplace_back(env);
    dirs.emplace_back(RHGA_TEST_DATA_DIR);
    dirs.emplace_back(RHGA_DATA_DIR);
    for (const auto& d : dirs)
        if (fs::exists(d / (name + ".tsp"))) return d / (name + ".tsp");
    return std::nullopt;
}

Outcome benchmark_regression() {
    const std::vector<std::pair<std::string, Length>> targets{{"pr1002", 259045}, {"u1060", 224094}};
    std::vector<std::string> missing;
    for (const auto& [name, bks] : targets)
        if (!find_instance(name)) missing.push_back(name);
    if (!missing.empty()) {
        std::string d = "instance files unavailable:";
        for (const auto& m : missing) d += " " + m + ".tsp";
        return {Status::Unavailable, d + " (set RHGA_TSPLIB_DIR)"};
    }
    bool ok = true;
    std::ostringstream d;
    d << std::fixed << std::setprecision(4);
    for (const auto& [name, bks] : targets) {
        const Instance inst = load_tsplib(find_instance(name)->string());
        const Prepared prep = prepare(inst);
        bool any_zero = false;
        d << name << ":";
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            SolverConfig cfg;
            cfg.seed = seed;
            cfg.opt = bks;
            cfg.time_limit = 600.0;
            const RunResult r = rhga_run(inst, cfg, prep);
            const double gap = gap_percent(r.best_length, bks);
            ok &= gap <= 0.05 && r.wall_time <= 600.0;
            any_zero |= r.best_length == bks;
            d << " [" << gap << "% " << std::setprecision(1) << r.wall_time << "s]" << std::setprecision(4);
        }
        ok &= any_zero;
        d << ' ';
    }
    return ok ? pass(d.str()) : fail(d.str());
}

// ---------------------------------------------------------------------------

// Mean final length per variant over the frozen 200-city manifest.
struct VariantMeans {
    std::map<Variant, double> mean;
    double seconds = 0.0;
};

const VariantMeans& frozen_manifest_means() {
    static const VariantMeans means = [] {
        const std::vector<Variant> variants{Variant::Rhga, Variant::EaxOnly, Variant::EaxLkh, Variant::AlphaEax,
                                            Variant::FixqEax};
        VariantMeans vm;
        const auto t0 = Clock::now();
        std::map<Variant, double> total;
        for (int i = 0; i < 20; ++i) {
            const Instance inst = test::random_euc(200, 9000 + static_cast<std::uint64_t>(i));
            const Prepared prep = prepare(inst);
            for (Variant v : variants)
                for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                    SolverConfig cfg;
                    cfg.variant = v;
                    cfg.seed = seed;
                    total[v] += static_cast<double>(rhga_run(inst, cfg, prep).best_length);
                }
        }
        for (const auto& [v, sum] : total) vm.mean[v] = sum / 60.0;
        vm.seconds = seconds_since(t0);
        return vm;
    }();
    return means;
}

std::string fmt_mean(double x) { return cat(std::fixed, std::setprecision(2), x); }

Outcome hybrid_beats_baseline() {
    const VariantMeans& vm = frozen_manifest_means();
    const double rhga = vm.mean.at(Variant::Rhga), eax = vm.mean.at(Variant::EaxOnly),
                 eax_lkh = vm.mean.at(Variant::EaxLkh);
    const std::string d = cat("mean length rhga ", fmt_mean(rhga), ", eax-lkh ", fmt_mean(eax_lkh), ", eax ",
                              fmt_mean(eax), "; all five variants took ", fmt_mean(vm.seconds), " s");
    return rhga <= eax && eax_lkh <= eax && vm.seconds <= 1800.0 ? pass(d) : fail(d);
}

Outcome metric_ordering() {
    const VariantMeans& vm = frozen_manifest_means();
    const double fixq = vm.mean.at(Variant::FixqEax), alpha = vm.mean.at(Variant::AlphaEax),
                 dist = vm.mean.at(Variant::EaxOnly);
    std::string d = cat("mean length fixq-eax ", fmt_mean(fixq), ", alpha-eax ", fmt_mean(alpha), ", eax ",
                        fmt_mean(dist));
    int small = 0, large = 0;
    // The two links of the chain; fixq vs eax follows from them.
    for (const auto& [lo, hi, label] : {std::tuple{fixq, alpha, "fixq>alpha"}, std::tuple{alpha, dist, "alpha>eax"}}) {
        if (lo <= hi) continue;
        const double rel = 100.0 * (lo - hi) / hi;
        d += cat("; inversion ", label, " by ", std::setprecision(4), rel, "%");
        (rel < 0.01 ? small : large) += 1;
    }
    if (small == 1 && large == 0) d += " (flagged, within noise)";
    return large == 0 && small <= 1 ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------

struct Fuzz {
    long iterations = 0;
    std::map<std::string, long> violations;

    void check(bool ok, const char* what) {
        if (!ok) ++violations[what];
    }
};

using EdgeBag = std::multiset<std::pair<int, int>>;

std::pair<int, int> undirected(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

EdgeBag edges_of(const Tour& t) {
    EdgeBag s;
    for (int k = 0; k < t.size(); ++k) s.insert(undirected(t.at(k), t.at((k + 1) % t.size())));
    return s;
}

void fuzz_tours(Fuzz& f, long count) {
    Rng rng(101);
    for (long it = 0; it < count; ++it, ++f.iterations) {
        const int n = 3 + rand_below(rng, 40);
        const Instance inst = test::random_euc(n, static_cast<std::uint64_t>(it % 97));
        Tour t = test::random_tour(inst, rng);
        for (int s = 0; s < 4; ++s) t.reverse_path(rand_below(rng, n), rand_below(rng, n));
        f.check(!validate_tour(t, n), "validate_tour after reversals");
        std::vector<int> order(t.order().begin(), t.order().end());
        f.check(tour_length(inst, order) == t.recompute_length(inst), "tour length");
    }
}

void fuzz_kopt(Fuzz& f, long count) {
    Rng rng(202);
    const Instance inst = test::random_euc(60, 3);
    const QTable qt = QTable::by_distance(inst, 10);
    Tour t = test::random_tour(inst, rng);
    for (long it = 0; it < count; ++it, ++f.iterations) {
        if (it % 200 == 0) t = test::random_tour(inst, rng);
        const Length before = t.length();
        const Tour copy = t;
        const int k_max = 2 + rand_below(rng, 5);
        const KOptEpisode ep = k_opt(inst, t, rand_below(rng, inst.size()), qt, k_max, rng);
        f.check(!validate_tour(t, inst.size()), "validate_tour after k-opt");
        f.check(tour_length(inst, t.order()) == t.length(), "k-opt cached length");
        if (ep.improved) {
            f.check(ep.gain > 0 && t.length() == before - ep.gain, "k-opt monotonicity");
            f.check(static_cast<int>(ep.path.size()) <= 2 * k_max, "k-opt depth");
        } else {
            f.check(t == copy, "k-opt leaves a failed start untouched");
        }
    }
}

void fuzz_eax(Fuzz& f, long count) {
    Rng rng(303);
    for (long it = 0; it < count; ++it, ++f.iterations) {
        const int n = 4 + rand_below(rng, 30);
        const Instance inst = test::random_euc(n, static_cast<std::uint64_t>(it % 89));
        const QTable qt = QTable::by_distance(inst, std::min(10, n - 1));
        Tour a = test::random_tour(inst, rng), b = test::random_tour(inst, rng);
        if (it % 3 == 0) {
            // Parents that share most edges, as in a converged population.
            b = a;
            for (int s = 0; s < 2; ++s) b.reverse_path(rand_below(rng, n), rand_below(rng, n));
            b.recompute_length(inst);
        }
        const auto cycles = partition_ab_cycles(a, b, rng);
        EdgeBag ea, eb;
        bool alternating = true;
        for (const ABCycle& c : cycles) {
            alternating &= c.edges() % 2 == 0;
            for (int i = 0; i < c.edges() / 2; ++i) {
                const auto [a0, a1] = c.a_edge(i);
                const auto [b0, b1] = c.b_edge(i);
                alternating &= a.has_edge(a0, a1) && b.has_edge(b0, b1);
                ea.insert(undirected(a0, a1));
                eb.insert(undirected(b0, b1));
            }
        }
        f.check(alternating, "AB-cycle alternation");
        f.check(ea == edges_of(a) && eb == edges_of(b), "AB-cycle conservation");

        ESet eset;
        for (int c = 0; c < static_cast<int>(cycles.size()); ++c)
            if (cycles[static_cast<std::size_t>(c)].effective() && (rng() & 1)) eset.push_back(c);
        Intermediate inter(a);
        inter.apply(cycles, eset);
        inter.rebuild();
        bool degree_two = true;
        for (int v = 0; v < n; ++v) {
            const auto nb = inter.neighbors(v);
            degree_two &= nb[0] != v && nb[1] != v && inter.has_edge(nb[0], v) && inter.has_edge(nb[1], v);
        }
        f.check(degree_two, "degree-2 intermediate");
        int covered = 0;
        for (const auto& sub : inter.subtours()) covered += static_cast<int>(sub.size());
        f.check(covered == n, "sub-tours cover every city");

        merge_subtours(inter, inst, qt);
        inter.rebuild();
        f.check(inter.subtour_count() == 1, "merge leaves one tour");
        const Tour child = materialize(inter, inst);
        f.check(!validate_tour(child, n) && tour_length(inst, child.order()) == child.length(), "materialized child");

        const Stage stage = it % 2 ? Stage::I : Stage::II;
        CrossoverOptions opts;
        opts.n_ch = 5;
        for (const Tour& kid : eax_crossover(inst, a, b, stage, qt, rng, opts))
            f.check(!validate_tour(kid, n) && tour_length(inst, kid.order()) == kid.length(), "EAX offspring");
    }
}

void fuzz_runs(Fuzz& f, long count) {
    const auto variants = all_variants();
    for (long it = 0; it < count; ++it, ++f.iterations) {
        const Variant v = variants[static_cast<std::size_t>(it) % variants.size()];
        const Instance inst = test::random_euc(20 + static_cast<int>(it % 40), 400 + static_cast<std::uint64_t>(it));
        SolverConfig cfg;
        cfg.variant = v;
        cfg.seed = static_cast<std::uint64_t>(it);
        cfg.n_pop = 20;
        cfg.n_ch = 8;
        cfg.special_count = 2;
        cfg.max_generations = 15;
        const RunResult r1 = rhga_run(inst, cfg);
        const RunResult r2 = rhga_run(inst, cfg);
        f.check(r1.trace == r2.trace && r1.best_tour == r2.best_tour && r1.q_lkh_calls == r2.q_lkh_calls,
                "determinism under a fixed seed");
        f.check(!validate_tour(r1.best_tour, inst.size()) &&
                    tour_length(inst, r1.best_tour.order()) == r1.best_length,
                "validate_tour on the result");
        bool monotone = true;
        for (std::size_t k = 1; k < r1.trace.size(); ++k) monotone &= r1.trace[k].second <= r1.trace[k - 1].second;
        f.check(monotone, "population-best monotonicity");
    }
}

Outcome structural_invariants() {
    const auto t0 = Clock::now();
    Fuzz f;
    fuzz_tours(f, 30000);
    fuzz_kopt(f, 30000);
    fuzz_eax(f, 39600);
    fuzz_runs(f, 400);
    long total = 0;
    std::string d = cat(f.iterations, " iterations in ", fmt_mean(seconds_since(t0)), " s");
    for (const auto& [what, c] : f.violations) {
        d += cat("; ", what, ": ", c);
        total += c;
    }
    d += cat(", violations ", total);
    return total == 0 && f.iterations >= 100000 ? pass(d) : fail(d);
}

}  // namespace

int main(int argc, char** argv) {
    // Criteria 5-7 compare solution quality on benchmarks and print an honest
    // verdict, but only the correctness criteria decide the exit status.
    struct Criterion {
        int id;
        std::function<Outcome()> run;
        bool gating;
    };
    const std::vector<Criterion> criteria{
        {1, oracle_equivalence, true},     {2, alpha_correctness, true},      {3, bound_dominance, true},
        {4, q_arithmetic, true},           {5, benchmark_regression, false},  {6, hybrid_beats_baseline, false},
        {7, metric_ordering, false},       {8, structural_invariants, true},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& [id, fn, gating] : criteria) {
        if (!wanted.empty() && !wanted.count(id)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = fail(cat("exception: ", e.what()));
        }
        std::cout << "criterion " << id << ": " << (o.status == Status::Pass ? "PASS" : "FAIL") << "  " << o.detail
                  << std::endl;
        failures += gating && o.status != Status::Pass;
    }
    return failures == 0 ? 0 : 1;
}
