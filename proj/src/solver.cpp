#include "rhga/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rhga {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Rhga: return "rhga";
        case Variant::EaxOnly: return "eax";
        case Variant::AlphaEax: return "alpha-eax";
        case Variant::FixqEax: return "fixq-eax";
        case Variant::QEax: return "q-eax";
        case Variant::QEaxSpecial: return "q-eax+special";
        case Variant::EaxLkh: return "eax-lkh";
        case Variant::AlphaEaxLkh: return "alpha-eax-lkh";
        case Variant::FixqEaxLkh: return "fixq-eax-lkh";
        case Variant::RhgaK: return "rhga-k";
    }
    return "?";
}

std::string to_string(MetricMode m) {
    switch (m) {
        case MetricMode::Distance: return "distance";
        case MetricMode::Alpha: return "alpha";
        case MetricMode::FixedQ: return "fixed-q";
        case MetricMode::AdaptiveQ: return "adaptive-q";
    }
    return "?";
}

const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> v{Variant::Rhga,      Variant::EaxOnly,     Variant::AlphaEax,
                                        Variant::FixqEax,   Variant::QEax,        Variant::QEaxSpecial,
                                        Variant::EaxLkh,    Variant::AlphaEaxLkh, Variant::FixqEaxLkh,
                                        Variant::RhgaK};
    return v;
}

std::optional<Variant> parse_variant(const std::string& name) {
    std::string s;
    for (char c : name) {
        if (c == '_') c = '-';
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (s == "eax-only" || s == "eax-300") return Variant::EaxOnly;
    if (s == "q-eax-special") return Variant::QEaxSpecial;
    for (Variant v : all_variants())
        if (to_string(v) == s) return v;
    return std::nullopt;
}

VariantPlan plan_for(Variant v, int special_count) {
    VariantPlan p;
    switch (v) {
        case Variant::EaxOnly: break;
        case Variant::AlphaEax: p.eax_metric = MetricMode::Alpha; break;
        case Variant::FixqEax: p.eax_metric = MetricMode::FixedQ; break;
        case Variant::QEax:
        case Variant::QEaxSpecial:
            p.eax_metric = MetricMode::AdaptiveQ;
            p.lkh_metric = MetricMode::AdaptiveQ;
            p.extra_special = true;
            p.learn = true;
            p.report_special = v == Variant::QEaxSpecial;
            p.stop_on_special = v == Variant::QEaxSpecial;
            break;
        case Variant::EaxLkh:
            p.lkh_metric = MetricMode::Alpha;
            p.specials = 1;
            break;
        case Variant::AlphaEaxLkh:
            p.eax_metric = MetricMode::Alpha;
            p.lkh_metric = MetricMode::Alpha;
            p.specials = 1;
            break;
        case Variant::FixqEaxLkh:
            p.eax_metric = MetricMode::FixedQ;
            p.lkh_metric = MetricMode::FixedQ;
            p.specials = 1;
            break;
        case Variant::Rhga:
        case Variant::RhgaK:
            p.eax_metric = MetricMode::AdaptiveQ;
            p.lkh_metric = MetricMode::AdaptiveQ;
            p.specials = v == Variant::Rhga ? 1 : special_count;
            p.learn = true;
            if (p.specials == 0) {
                // No special individual left to learn with: plain EAX on the initial Q.
                p.lkh_metric.reset();
                p.learn = false;
            }
            break;
    }
    return p;
}

void SolverConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (n_pop < 2) fail("n_pop must be at least 2");
    if (n_ch < 1) fail("n_ch must be at least 1");
    if (k_max < 2) fail("k_max must be at least 2");
    if (!(lambda > 0.0 && lambda <= 1.0)) fail("lambda must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must be in [0, 1]");
    if (m_gen && *m_gen < 1) fail("m_gen must be at least 1");
    if (special_count < 0) fail("special_count must be non-negative");
    if (variant == Variant::RhgaK && special_count >= n_pop) fail("special_count must be below n_pop");
    if (candidates < 5) fail("candidate lists need at least 5 entries");
    if (time_limit && *time_limit <= 0.0) fail("time limit must be positive");
    if (metric_mode && *metric_mode != plan_for(variant, special_count).eax_metric)
        fail("metric mode " + to_string(*metric_mode) + " does not match variant " + to_string(variant));
}

int auto_m_gen(int n) {
    const double v = 10.0 * (std::log10(static_cast<double>(n)) - 1.0);
    return std::max(1, static_cast<int>(std::lround(v)));
}

StageState StageState::for_nch(int n_ch) {
    StageState st;
    st.window = std::max(1, 1500 / std::max(1, n_ch));
    return st;
}

StageAction stage_step(StageState& st, Length best) {
    const int g = st.calls++;
    bool improved = false;
    if (g == 0) {
        st.best = best;
        st.last_improvement = 0;
    } else if (best < st.best) {
        st.best = best;
        st.last_improvement = g;
        improved = true;
    }
    if (!st.gen) {
        if (g - st.last_improvement >= st.window) {
            st.gen = g;
            st.g_max = std::max(1, g / 10);
            st.flat = 0;
        }
        return StageAction::Continue;
    }
    st.flat = improved ? 0 : st.flat + 1;
    if (st.flat < st.g_max) return StageAction::Continue;
    if (st.stage == Stage::II) return StageAction::Terminate;
    // Stage II starts with this generation as its generation 0.
    StageState next;
    next.stage = Stage::II;
    next.window = st.window;
    next.calls = 1;
    next.best = best;
    st = next;
    return StageAction::SwitchStage;
}

Prepared prepare(const Instance& inst, int candidates) {
    Prepared p;
    p.ascent = ascend_penalties(inst);
    p.alpha = alpha_values(inst, p.ascent.pi, 2 * candidates);
    return p;
}

namespace {

using Clock = std::chrono::steady_clock;

QTable make_table(const Instance& inst, const Prepared& prep, MetricMode m, int K) {
    switch (m) {
        case MetricMode::Distance: return QTable::by_distance(inst, K);
        case MetricMode::Alpha: return QTable::by_alpha(prep.alpha, K);
        case MetricMode::FixedQ:
        case MetricMode::AdaptiveQ: return QTable::initial(inst, prep.alpha, prep.ascent.bound, K);
    }
    return {};
}

class Run {
public:
    Run(const Instance& inst, const SolverConfig& cfg, const Prepared& prep)
        : inst_(inst), cfg_(cfg), plan_(plan_for(cfg.variant, cfg.special_count)), rng_(cfg.seed) {
        eax_table_ = make_table(inst, prep, plan_.eax_metric, cfg.candidates);
        if (plan_.lkh_metric) {
            // One shared table when both sides use the same Q (RHGA, Q-EAX,
            // FixQ-EAX-LKH); a separate one otherwise.
            share_ = *plan_.lkh_metric == plan_.eax_metric;
            if (!share_) lkh_table_ = make_table(inst, prep, *plan_.lkh_metric, cfg.candidates);
        }
        m_gen_ = cfg.m_gen ? *cfg.m_gen : auto_m_gen(inst.size());
        specials_ = plan_.extra_special ? 1 : plan_.specials;
        regular_from_ = specials_;
        if (cfg.time_limit)
            deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*cfg.time_limit));
    }

    RunResult go(QTable* final_table) {
        const int total = cfg_.n_pop + (plan_.extra_special ? 1 : 0);
        pop_ = init_population(inst_, total, eax_table_.neighbor_lists(10), rng_);
        l_old_.assign(static_cast<std::size_t>(specials_), std::numeric_limits<Length>::max());
        num_.assign(static_cast<std::size_t>(specials_), 0);
        l_old_best_ = std::numeric_limits<Length>::max();

        StageState st = StageState::for_nch(cfg_.n_ch);
        Stage stage = Stage::I;
        RunResult res;
        int gen = 0;
        res.trace.emplace_back(0, reported_best());
        stage_step(st, reported_best());
        while (true) {
            if (hit_opt()) {
                res.reached_opt = true;
                break;
            }
            if (out_of_time()) {
                res.time_limit_exceeded = true;
                break;
            }
            if (cfg_.max_generations && gen >= *cfg_.max_generations) break;
            if (specials_ > 0) special_cases();
            if (out_of_time()) {
                res.time_limit_exceeded = true;
                break;
            }
            generation(stage);
            ++gen;
            const Length best = reported_best();
            res.trace.emplace_back(gen, best);
            const StageAction act = stage_step(st, best);
            if (act == StageAction::SwitchStage) stage = Stage::II;
            if (act == StageAction::Terminate) break;
        }
        if (!res.reached_opt && hit_opt()) res.reached_opt = true;
        const int b = reported_best_index();
        res.best_tour = pop_[b];
        res.best_length = pop_[b].length();
        res.generations = gen;
        res.q_lkh_calls = q_lkh_calls_;
        res.final_stage = stage;
        res.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
        if (final_table) *final_table = share_ || !plan_.lkh_metric ? eax_table_ : lkh_table_;
        return res;
    }

private:
    QTable& lkh_table() { return share_ ? eax_table_ : lkh_table_; }

    bool out_of_time() const { return deadline_ && Clock::now() > *deadline_; }

    int reported_best_index() const {
        const int from = plan_.report_special ? 0 : regular_from_;
        return pop_.best_index(from);
    }
    Length reported_best() const { return pop_[reported_best_index()].length(); }

    bool hit_opt() const {
        if (!cfg_.opt) return false;
        if (pop_.best_length(regular_from_) <= *cfg_.opt) return true;
        if (!plan_.stop_on_special) return false;
        for (int i = 0; i < specials_; ++i)
            if (pop_[i].length() <= *cfg_.opt) return true;
        return false;
    }

    // Runs Q-LKH on a copy of `t` and returns it.
    Tour local_search(const Tour& t) {
        Tour copy = t;
        QLkhOptions o;
        o.k_max = cfg_.k_max;
        o.lambda = cfg_.lambda;
        o.gamma = cfg_.gamma;
        o.learn = plan_.learn;
        o.bootstrap = cfg_.bootstrap;
        o.deadline = deadline_;
        q_lkh(inst_, copy, lkh_table(), o, rng_);
        ++q_lkh_calls_;
        return copy;
    }

    void special_cases() {
        const auto k = static_cast<std::size_t>(specials_);
        for (std::size_t i = 0; i < k; ++i) ++num_[i];
        // Case 1: a special individual that may not be locally optimal.
        for (std::size_t i = 0; i < k; ++i) {
            const int slot = static_cast<int>(i);
            if (pop_[slot].length() < l_old_[i]) {
                Tour t = local_search(pop_[slot]);
                if (t.length() < pop_[slot].length()) pop_.replace(slot, std::move(t));
                l_old_[i] = pop_[slot].length();
                num_[i] = 0;
            }
        }
        // Case 2: the best regular individual beats every special one.
        const int xb = pop_.best_index(regular_from_);
        int best_special = 0;
        for (int i = 1; i < specials_; ++i)
            if (pop_[i].length() < pop_[best_special].length()) best_special = i;
        const Length lb = pop_[xb].length();
        if (lb < pop_[best_special].length() && lb < l_old_best_) {
            l_old_best_ = lb;
            Tour t = local_search(pop_[xb]);
            if (t.length() < lb) {
                pop_.replace(0, std::move(t));
                l_old_[0] = pop_[0].length();
                num_[0] = 0;
            }
        }
        // Case 3: a special individual stuck for M_gen generations.
        for (std::size_t i = 0; i < k; ++i) {
            if (num_[i] < m_gen_) continue;
            const int r = regular_from_ + rand_below(rng_, pop_.size() - regular_from_);
            Tour t = local_search(pop_[r]);
            num_[i] = 0;
            const int slot = static_cast<int>(i);
            if (t.length() < pop_[slot].length()) {
                pop_.replace(slot, std::move(t));
                l_old_[i] = pop_[slot].length();
            }
        }
    }

    void mate(int a, int b, Stage stage) {
        const Tour& pa = pop_[a];
        auto kids = eax_offspring(inst_, pa, pop_[b], stage, eax_table_, rng_, opts());
        if (kids.empty()) return;
        std::vector<Length> lengths;
        std::vector<EdgeDiff> diffs;
        lengths.reserve(kids.size());
        for (const auto& k : kids) lengths.push_back(k.length);
        if (cfg_.survivor == SurvivorMode::Entropy) {
            diffs.reserve(kids.size());
            for (const auto& k : kids) diffs.push_back(edge_diff(pa, k.adj));
        } else {
            diffs.resize(kids.size());
        }
        const auto pick = pick_survivor(lengths, diffs, pa.length(), pop_.freq, pop_.size(), cfg_.survivor);
        if (!pick) return;
        Tour child = materialize(pa, kids[*pick], inst_);
        pop_.replace(a, std::move(child));
    }

    CrossoverOptions opts() const {
        CrossoverOptions o = cfg_.crossover;
        o.n_ch = cfg_.n_ch;
        return o;
    }

    void generation(Stage stage) {
        if (plan_.extra_special) {
            std::vector<int> rp(static_cast<std::size_t>(pop_.size() - 1));
            std::iota(rp.begin(), rp.end(), 1);
            std::shuffle(rp.begin(), rp.end(), rng_);
            for (std::size_t i = 0; i < rp.size(); ++i) {
                if (out_of_time()) return;
                mate(rp[i], rp[(i + 1) % rp.size()], stage);
            }
            // The extra special individual is only ever p_A.
            mate(0, 1 + rand_below(rng_, pop_.size() - 1), stage);
            return;
        }
        std::vector<int> rp(static_cast<std::size_t>(pop_.size()));
        std::iota(rp.begin(), rp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng_);
        for (std::size_t i = 0; i < rp.size(); ++i) {
            if (out_of_time()) return;
            mate(rp[i], rp[(i + 1) % rp.size()], stage);
        }
    }

    const Instance& inst_;
    const SolverConfig& cfg_;
    VariantPlan plan_;
    Rng rng_;
    QTable eax_table_;
    QTable lkh_table_;
    bool share_ = false;
    int m_gen_ = 1;
    int specials_ = 0;
    int regular_from_ = 0;
    Population pop_;
    std::vector<Length> l_old_;
    std::vector<int> num_;
    Length l_old_best_ = 0;
    long q_lkh_calls_ = 0;
    Clock::time_point start_ = Clock::now();
    std::optional<Clock::time_point> deadline_;
};

}  // namespace

RunResult rhga_run(const Instance& inst, const SolverConfig& cfg) {
    cfg.validate();
    const Prepared prep = prepare(inst, cfg.candidates);
    return rhga_run(inst, cfg, prep);
}

RunResult rhga_run(const Instance& inst, const SolverConfig& cfg, const Prepared& prep, QTable* final_table) {
    cfg.validate();
    Run run(inst, cfg, prep);
    return run.go(final_table);
}

}  // namespace rhga
