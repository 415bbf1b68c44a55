#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhga/eax.hpp"
#include "rhga/instance.hpp"
#include "rhga/lk_search.hpp"
#include "rhga/one_tree.hpp"
#include "rhga/q_table.hpp"
#include "rhga/tour.hpp"

namespace rhga {

enum class Variant {
    Rhga,
    EaxOnly,
    AlphaEax,
    FixqEax,
    QEax,
    QEaxSpecial,
    EaxLkh,
    AlphaEaxLkh,
    FixqEaxLkh,
    RhgaK,
};

enum class MetricMode { Distance, Alpha, FixedQ, AdaptiveQ };

std::string to_string(Variant v);
std::string to_string(MetricMode m);
/// Accepts names like "rhga", "eax", "alpha-eax", "q-eax+special", "rhga-k".
std::optional<Variant> parse_variant(const std::string& name);
const std::vector<Variant>& all_variants();

/// What a variant turns on.
struct VariantPlan {
    MetricMode eax_metric = MetricMode::Distance;
    std::optional<MetricMode> lkh_metric;  // none: no local search
    int specials = 0;                      // special individuals inside the population
    bool extra_special = false;            // one more individual that is only ever p_A
    bool learn = false;
    bool report_special = true;   // special individuals count for the result
    bool stop_on_special = true;  // reaching OPT with a special individual stops the run
};

VariantPlan plan_for(Variant v, int special_count = 1);

struct SolverConfig {
    int n_pop = 300;
    int n_ch = 30;
    int k_max = 5;
    double lambda = 0.1;
    double gamma = 0.9;
    std::optional<int> m_gen;  // none: automatic
    std::optional<Length> opt;
    Variant variant = Variant::Rhga;
    int special_count = 1;  // RHGA-k
    std::optional<MetricMode> metric_mode;  // must agree with the variant when given
    std::uint64_t seed = 1;
    std::optional<double> time_limit;  // seconds
    std::optional<int> max_generations;
    int candidates = QTable::kDefaultCapacity;
    Bootstrap bootstrap = Bootstrap::Successor;
    SurvivorMode survivor = SurvivorMode::Entropy;
    CrossoverOptions crossover;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// round(10 (log10 n - 1)), at least 1.
int auto_m_gen(int n);

enum class StageAction { Continue, SwitchStage, Terminate };

/// Two-stage termination bookkeeping. `calls` counts generations within the
/// stage, the first call being generation 0.
struct StageState {
    Stage stage = Stage::I;
    int window = 50;  // 1500 / N_ch
    int calls = 0;
    Length best = 0;
    int last_improvement = 0;
    std::optional<int> gen;  // fixed once the window saw no improvement
    int g_max = 0;
    int flat = 0;  // generations without improvement since gen was fixed

    static StageState for_nch(int n_ch);
};

StageAction stage_step(StageState& st, Length best);

struct RunResult {
    Tour best_tour;
    Length best_length = 0;
    int generations = 0;
    double wall_time = 0.0;
    long q_lkh_calls = 0;
    std::vector<std::pair<int, Length>> trace;  // (generation, best length)
    bool time_limit_exceeded = false;
    bool reached_opt = false;
    Stage final_stage = Stage::I;
};

/// Penalties, bound and alpha lists shared by the candidate tables.
struct Prepared {
    AscentResult ascent;
    std::vector<std::vector<AlphaEntry>> alpha;
};

Prepared prepare(const Instance& inst, int candidates = QTable::kDefaultCapacity);

RunResult rhga_run(const Instance& inst, const SolverConfig& cfg);
RunResult rhga_run(const Instance& inst, const SolverConfig& cfg, const Prepared& prep,
                   QTable* final_table = nullptr);

}  // namespace rhga
