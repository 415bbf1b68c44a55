#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rhga/instance.hpp"
#include "rhga/q_table.hpp"
#include "rhga/tour.hpp"

namespace rhga {

/// Closed walk v0 -A- v1 -B- v2 -A- ... v_{2m-1} -B- v0 alternating edges of
/// parent A and parent B.
struct ABCycle {
    std::vector<int> cities;

    int edges() const { return static_cast<int>(cities.size()); }
    /// Two-edge cycles come from edges shared by both parents; selecting them
    /// changes nothing.
    bool effective() const { return cities.size() > 2; }
    std::pair<int, int> a_edge(int i) const;  // i-th A edge
    std::pair<int, int> b_edge(int i) const;  // i-th B edge
};

/// Partitions the union multigraph of the parents into AB-cycles. Shared
/// edges become two-edge cycles; the rest is traced by random alternating walks.
std::vector<ABCycle> partition_ab_cycles(const Tour& a, const Tour& b, Rng& rng);

using ESet = std::vector<int>;  // indices into the cycle list

/// Stage I selection: one unused effective cycle at a time, uniformly.
class SingleCycleSelector {
public:
    explicit SingleCycleSelector(const std::vector<ABCycle>& cycles);
    /// nullopt once every effective cycle has been used.
    std::optional<ESet> next(Rng& rng);
    int remaining() const { return static_cast<int>(unused_.size()); }

private:
    std::vector<int> unused_;
};

/// Edge set C = (E_A minus selected A edges) plus selected B edges, stored as
/// overrides of a base tour. Untouched cities keep their tour neighbors, so
/// sub-tours are found by walking only the touched cities and jumping over
/// untouched runs of the base tour.
class Intermediate {
public:
    struct Override {
        int city;
        std::array<int, 2> adj;
    };

    explicit Intermediate(const Tour& base);

    const Tour& base() const { return *base_; }
    void reset();
    void apply_cycle(const ABCycle& c);
    void apply(const std::vector<ABCycle>& cycles, const ESet& eset);
    /// Sets every city's neighbors explicitly (all cities become touched).
    void assign(const std::vector<std::array<int, 2>>& adj);

    std::array<int, 2> neighbors(int city) const {
        const int s = slot_[static_cast<std::size_t>(city)];
        if (s < 0) return {base_->prev(city), base_->next(city)};
        return touched_[static_cast<std::size_t>(s)].adj;
    }
    bool has_edge(int a, int b) const {
        const auto nb = neighbors(a);
        return nb[0] == b || nb[1] == b;
    }
    /// Replaces neighbor `old_nb` of `city` by `new_nb`.
    void relink(int city, int old_nb, int new_nb);

    /// Recomputes the sub-tour structure; required after edits.
    void rebuild();
    int subtour_count() const { return static_cast<int>(comp_edges_.size()); }
    int component(int city) const;
    int component_edges(int comp) const { return comp_edges_[static_cast<std::size_t>(comp)]; }
    /// Cities of one component in cycle order.
    std::vector<int> cycle_of(int comp) const;
    std::vector<std::vector<int>> subtours() const;

    std::span<const Override> overrides() const { return touched_; }
    void load(std::span<const Override> overrides);

    /// Sum of d over C minus the base tour length.
    Length delta(const Instance& inst) const;
    /// Walks C from city 0 into a city sequence (requires one sub-tour).
    std::vector<int> to_order() const;

private:
    Override& touch(int city);
    // From touched index t entered via city `came` (-1 at the start): the next
    // touched index and the city it is entered from; adds the edges crossed.
    std::pair<int, int> step(int t, int came, int& edges) const;

    const Tour* base_;
    std::vector<int> slot_;
    std::vector<Override> touched_;
    // Sub-tour structure, valid after rebuild().
    std::vector<std::pair<int, int>> by_pos_;  // (position, touched index), sorted
    std::vector<int> rank_;                    // touched index -> index in by_pos_
    std::vector<int> comp_;                    // per touched index
    std::vector<int> comp_edges_;
    std::vector<int> comp_start_;  // a touched city in each component
};

struct MergeOptions {
    int near = 10;  // candidate view size for e'
    int wide = 25;  // first fallback
};

/// Joins sub-tours until one remains: repeatedly takes the sub-tour with the
/// fewest edges and applies the cheapest 2-exchange with an edge of another
/// sub-tour that has an endpoint in the candidate view of an endpoint of the
/// removed edge. Returns the total length change of the exchanges.
Length merge_subtours(Intermediate& inter, const Instance& inst, const QTable& qt,
                      const MergeOptions& opts = {});

/// Tour from a single-sub-tour intermediate (length from the base plus deltas).
Tour materialize(const Intermediate& inter, const Instance& inst);

struct Block2Options {
    double beta = 0.3;   // stop once this fraction of effective cycles is selected
    int sample = 10;     // candidate cycles evaluated per greedy step
};

/// Stage II E-set: seeded by effective cycle `seed`, grown greedily with
/// vertex-sharing cycles that keep the sub-tour count of the intermediate low,
/// preferring those with more B edges.
ESet select_eset_block2(const Tour& a, const std::vector<ABCycle>& cycles, int seed, Rng& rng,
                        const Block2Options& opts = {});

/// Effective cycle indices sorted for block2 seeding (most edges first, ties random).
std::vector<int> block2_seed_order(const std::vector<ABCycle>& cycles, Rng& rng);

enum class Stage { I, II };

struct CrossoverOptions {
    int n_ch = 30;
    MergeOptions merge;
    Block2Options block2;
};

/// Offspring kept as overrides of parent A.
struct Offspring {
    std::vector<Intermediate::Override> adj;
    Length length = 0;
};

/// Steps 1-6 without materializing the children.
std::vector<Offspring> eax_offspring(const Instance& inst, const Tour& a, const Tour& b, Stage stage,
                                     const QTable& qt, Rng& rng, const CrossoverOptions& opts = {});

/// Same, returning full tours.
std::vector<Tour> eax_crossover(const Instance& inst, const Tour& a, const Tour& b, Stage stage,
                                const QTable& qt, Rng& rng, const CrossoverOptions& opts = {});

Tour materialize(const Tour& a, const Offspring& child, const Instance& inst);

/// Undirected edge multiplicities over the population.
class EdgeFrequency {
public:
    EdgeFrequency() = default;
    explicit EdgeFrequency(int n) : rows_(static_cast<std::size_t>(n)) {}

    int get(int u, int v) const;
    void add(int u, int v, int delta);
    void add_tour(std::span<const int> order, int delta);
    /// Sum of counts over undirected edges.
    long long total() const;
    bool operator==(const EdgeFrequency& o) const;
    /// -sum (f/N) ln(f/N) over edges with f > 0.
    double entropy(int population) const;

private:
    std::vector<std::vector<std::pair<int, int>>> rows_;
};

struct EdgeDiff {
    std::vector<std::pair<int, int>> removed;  // u < v
    std::vector<std::pair<int, int>> added;
};

EdgeDiff edge_diff(const Tour& a, std::span<const Intermediate::Override> child);
EdgeDiff edge_diff(const Tour& a, const Tour& child);

/// Entropy before minus entropy after applying the diff.
double entropy_loss(const EdgeFrequency& freq, int population, const EdgeDiff& diff);

enum class SurvivorMode { Entropy, Length };

struct Population;

/// Index of the survivor among children strictly shorter than the parent, or
/// nullopt to keep the parent.
std::optional<std::size_t> pick_survivor(std::span<const Length> lengths, std::span<const EdgeDiff> diffs,
                                         Length parent_length, const EdgeFrequency& freq, int population,
                                         SurvivorMode mode);

struct Population {
    std::vector<Tour> individuals;
    EdgeFrequency freq;

    Population() = default;
    Population(int n, std::vector<Tour> tours);

    int size() const { return static_cast<int>(individuals.size()); }
    const Tour& operator[](int i) const { return individuals[static_cast<std::size_t>(i)]; }
    /// Replaces slot i and keeps the frequencies in step.
    void replace(int i, Tour t);
    int best_index(int from = 0) const;
    Length best_length(int from = 0) const;
    /// Frequencies recomputed from scratch equal the maintained ones.
    bool consistent() const;
};

/// N_pop greedy 2-opt tours over the given neighbor lists.
Population init_population(const Instance& inst, int n_pop, const std::vector<std::vector<int>>& candidates,
                           Rng& rng);

/// Replaces pop[slot] with the best eligible child (or keeps it). Returns the
/// survivor when the slot changed.
std::optional<Tour> select_survivor(const std::vector<Tour>& children, const Tour& parent, Population& pop,
                                    int slot, SurvivorMode mode = SurvivorMode::Entropy);

}  // namespace rhga
