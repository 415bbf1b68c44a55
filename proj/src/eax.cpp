#include "rhga/eax.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace rhga {

// ---------------------------------------------------------------- AB-cycles

std::pair<int, int> ABCycle::a_edge(int i) const {
    return {cities[static_cast<std::size_t>(2 * i)], cities[static_cast<std::size_t>(2 * i + 1)]};
}

std::pair<int, int> ABCycle::b_edge(int i) const {
    const auto m = cities.size();
    return {cities[static_cast<std::size_t>(2 * i + 1)], cities[(static_cast<std::size_t>(2 * i + 2)) % m]};
}

namespace {

enum Label { A = 0, B = 1 };

// Up to two remaining edges of one label at a city.
struct Slots {
    std::array<int, 2> v{-1, -1};
    int count = 0;
    void push(int x) { v[static_cast<std::size_t>(count++)] = x; }
    void erase(int x) {
        if (v[0] == x) {
            v[0] = v[1];
        }
        v[1] = -1;
        --count;
    }
};

}  // namespace

std::vector<ABCycle> partition_ab_cycles(const Tour& a, const Tour& b, Rng& rng) {
    const int n = a.size();
    if (b.size() != n) throw std::invalid_argument("parents differ in size");
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::array<Slots, 2>> rem(un);
    std::vector<ABCycle> out;

    for (int c = 0; c < n; ++c) {
        const int an[2] = {a.prev(c), a.next(c)};
        const int bn[2] = {b.prev(c), b.next(c)};
        for (int x : an) {
            if (x == bn[0] || x == bn[1]) {
                if (c < x) out.push_back(ABCycle{{c, x}});
            } else {
                rem[static_cast<std::size_t>(c)][A].push(x);
            }
        }
        for (int x : bn)
            if (x != an[0] && x != an[1]) rem[static_cast<std::size_t>(c)][B].push(x);
    }

    std::vector<int> starts(un);
    std::iota(starts.begin(), starts.end(), 0);
    std::shuffle(starts.begin(), starts.end(), rng);

    std::vector<int> path;
    std::vector<int> arrived;  // label of the edge entering path[k]; B for the start
    // occ[c][label]: indices in path where c was entered through label
    std::vector<std::array<std::vector<int>, 2>> occ(un);

    auto take = [&](int c, int label) {
        auto& s = rem[static_cast<std::size_t>(c)][static_cast<std::size_t>(label)];
        const int x = s.count == 2 ? s.v[static_cast<std::size_t>(rng() & 1)] : s.v[0];
        s.erase(x);
        rem[static_cast<std::size_t>(x)][static_cast<std::size_t>(label)].erase(c);
        return x;
    };

    for (int s : starts) {
        while (rem[static_cast<std::size_t>(s)][A].count > 0) {
            path.assign(1, s);
            arrived.assign(1, B);
            occ[static_cast<std::size_t>(s)][B].push_back(0);
            int cur = s;
            int need = A;
            while (true) {
                if (rem[static_cast<std::size_t>(cur)][static_cast<std::size_t>(need)].count == 0) {
                    // Only possible at the start once it is exhausted.
                    assert(path.size() == 1);
                    break;
                }
                const int nxt = take(cur, need);
                auto& seen = occ[static_cast<std::size_t>(nxt)][static_cast<std::size_t>(need)];
                if (seen.empty()) {
                    path.push_back(nxt);
                    arrived.push_back(need);
                    seen.push_back(static_cast<int>(path.size()) - 1);
                    cur = nxt;
                    need = 1 - need;
                    continue;
                }
                // Close the cycle path[i..end] -> path[i].
                const auto i = static_cast<std::size_t>(seen.back());
                ABCycle cyc;
                cyc.cities.reserve(path.size() - i);
                if (need == B) {
                    // Edge path[i] -> path[i+1] is A.
                    for (std::size_t k = i; k < path.size(); ++k) cyc.cities.push_back(path[k]);
                } else {
                    for (std::size_t k = i + 1; k < path.size(); ++k) cyc.cities.push_back(path[k]);
                    cyc.cities.push_back(path[i]);
                }
                out.push_back(std::move(cyc));
                for (std::size_t k = path.size(); k-- > i + 1;) {
                    occ[static_cast<std::size_t>(path[k])][static_cast<std::size_t>(arrived[k])].pop_back();
                }
                path.resize(i + 1);
                arrived.resize(i + 1);
                cur = path[i];
                need = 1 - arrived[i];
                if (i == 0 && rem[static_cast<std::size_t>(cur)][A].count == 0) break;
            }
            for (std::size_t k = 0; k < path.size(); ++k)
                occ[static_cast<std::size_t>(path[k])][static_cast<std::size_t>(arrived[k])].clear();
        }
    }
    return out;
}

SingleCycleSelector::SingleCycleSelector(const std::vector<ABCycle>& cycles) {
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (cycles[i].effective()) unused_.push_back(static_cast<int>(i));
}

std::optional<ESet> SingleCycleSelector::next(Rng& rng) {
    if (unused_.empty()) return std::nullopt;
    const auto k = static_cast<std::size_t>(rand_below(rng, static_cast<int>(unused_.size())));
    const int c = unused_[k];
    unused_[k] = unused_.back();
    unused_.pop_back();
    return ESet{c};
}

// ------------------------------------------------------------- Intermediate

Intermediate::Intermediate(const Tour& base)
    : base_(&base), slot_(static_cast<std::size_t>(base.size()), -1) {}

void Intermediate::reset() {
    for (const auto& o : touched_) slot_[static_cast<std::size_t>(o.city)] = -1;
    touched_.clear();
    by_pos_.clear();
    comp_edges_.clear();
}

Intermediate::Override& Intermediate::touch(int city) {
    int& s = slot_[static_cast<std::size_t>(city)];
    if (s < 0) {
        s = static_cast<int>(touched_.size());
        touched_.push_back({city, {base_->prev(city), base_->next(city)}});
    }
    return touched_[static_cast<std::size_t>(s)];
}

void Intermediate::relink(int city, int old_nb, int new_nb) {
    auto& o = touch(city);
    if (o.adj[0] == old_nb) o.adj[0] = new_nb;
    else if (o.adj[1] == old_nb) o.adj[1] = new_nb;
    else throw std::logic_error("relink: missing edge");
}

void Intermediate::apply_cycle(const ABCycle& c) {
    const auto m = c.cities.size();
    for (std::size_t i = 0; i < m; ++i) {
        const int x = c.cities[i];
        const int pa = i % 2 == 0 ? c.cities[i + 1] : c.cities[i - 1];
        const int pb = i % 2 == 0 ? c.cities[(i + m - 1) % m] : c.cities[(i + 1) % m];
        relink(x, pa, pb);
    }
}

void Intermediate::apply(const std::vector<ABCycle>& cycles, const ESet& eset) {
    for (int i : eset) apply_cycle(cycles[static_cast<std::size_t>(i)]);
}

void Intermediate::assign(const std::vector<std::array<int, 2>>& adj) {
    reset();
    for (int c = 0; c < base_->size(); ++c) touch(c).adj = adj[static_cast<std::size_t>(c)];
}

void Intermediate::load(std::span<const Override> overrides) {
    reset();
    for (const auto& o : overrides) touch(o.city).adj = o.adj;
}

std::pair<int, int> Intermediate::step(int t, int came, int& edges) const {
    const int n = base_->size();
    const auto& o = touched_[static_cast<std::size_t>(t)];
    const int city = o.city;
    const int nxt = came == -1 ? o.adj[0] : (o.adj[0] == came ? o.adj[1] : o.adj[0]);
    const int s = slot_[static_cast<std::size_t>(nxt)];
    if (s >= 0) {
        edges += 1;
        return {s, city};
    }
    // Untouched neighbor: jump over the run of the base tour it belongs to.
    const auto tsz = static_cast<int>(by_pos_.size());
    const int r = rank_[static_cast<std::size_t>(t)];
    const int pc = base_->position(city);
    if (nxt == base_->next(city)) {
        const int tgt = by_pos_[static_cast<std::size_t>((r + 1) % tsz)].second;
        const int tc = touched_[static_cast<std::size_t>(tgt)].city;
        edges += (base_->position(tc) - pc - 1 + n) % n + 1;
        return {tgt, base_->prev(tc)};
    }
    const int tgt = by_pos_[static_cast<std::size_t>((r - 1 + tsz) % tsz)].second;
    const int tc = touched_[static_cast<std::size_t>(tgt)].city;
    edges += (pc - base_->position(tc) - 1 + n) % n + 1;
    return {tgt, base_->next(tc)};
}

void Intermediate::rebuild() {
    const int n = base_->size();
    const auto t = touched_.size();
    by_pos_.clear();
    comp_edges_.clear();
    comp_start_.clear();
    if (t == 0) {
        comp_edges_.push_back(n);
        comp_start_.push_back(0);
        return;
    }
    by_pos_.reserve(t);
    for (std::size_t i = 0; i < t; ++i) by_pos_.emplace_back(base_->position(touched_[i].city), static_cast<int>(i));
    std::sort(by_pos_.begin(), by_pos_.end());
    rank_.assign(t, 0);
    for (std::size_t r = 0; r < t; ++r) rank_[static_cast<std::size_t>(by_pos_[r].second)] = static_cast<int>(r);
    comp_.assign(t, -1);
    for (std::size_t r = 0; r < t; ++r) {
        const int start = by_pos_[r].second;
        if (comp_[static_cast<std::size_t>(start)] >= 0) continue;
        const int label = static_cast<int>(comp_edges_.size());
        int edges = 0;
        int cur = start;
        int came = -1;
        do {
            comp_[static_cast<std::size_t>(cur)] = label;
            std::tie(cur, came) = step(cur, came, edges);
        } while (cur != start);
        comp_edges_.push_back(edges);
        comp_start_.push_back(touched_[static_cast<std::size_t>(start)].city);
    }
}

int Intermediate::component(int city) const {
    if (by_pos_.empty()) return 0;
    const int s = slot_[static_cast<std::size_t>(city)];
    if (s >= 0) return comp_[static_cast<std::size_t>(s)];
    const int p = base_->position(city);
    auto it = std::lower_bound(by_pos_.begin(), by_pos_.end(), std::pair<int, int>{p, -1});
    const auto& owner = it == by_pos_.begin() ? by_pos_.back() : *std::prev(it);
    return comp_[static_cast<std::size_t>(owner.second)];
}

std::vector<int> Intermediate::cycle_of(int comp) const {
    std::vector<int> out;
    const int s = comp_start_[static_cast<std::size_t>(comp)];
    int prev = -1, cur = s;
    do {
        out.push_back(cur);
        const auto nb = neighbors(cur);
        const int nxt = (prev == -1 || nb[0] != prev) ? nb[0] : nb[1];
        prev = cur;
        cur = nxt;
    } while (cur != s);
    return out;
}

std::vector<std::vector<int>> Intermediate::subtours() const {
    std::vector<std::vector<int>> out;
    for (int c = 0; c < subtour_count(); ++c) out.push_back(cycle_of(c));
    return out;
}

Length Intermediate::delta(const Instance& inst) const {
    Length twice = 0;
    for (const auto& o : touched_) {
        twice += inst.distance(o.city, o.adj[0]) + inst.distance(o.city, o.adj[1]);
        twice -= inst.distance(o.city, base_->prev(o.city)) + inst.distance(o.city, base_->next(o.city));
    }
    return twice / 2;
}

std::vector<int> Intermediate::to_order() const {
    const int n = base_->size();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    int prev = -1, cur = 0;
    for (int k = 0; k < n; ++k) {
        order.push_back(cur);
        const auto nb = neighbors(cur);
        const int nxt = (prev == -1 || nb[0] != prev) ? nb[0] : nb[1];
        prev = cur;
        cur = nxt;
    }
    if (cur != 0) throw std::logic_error("intermediate is not a single tour");
    return order;
}

// ------------------------------------------------------------------ merging

namespace {

struct Exchange {
    Length delta;
    int a, b, c, d;  // remove (a,b), (c,d); add (a,c), (b,d)
};

auto exchange_key(const Exchange& x) {
    return std::make_tuple(x.delta, std::min(x.a, x.b), std::max(x.a, x.b), std::min(x.c, x.d),
                           std::max(x.c, x.d), x.a, x.c);
}

}  // namespace

Length merge_subtours(Intermediate& inter, const Instance& inst, const QTable& qt, const MergeOptions& opts) {
    Length total = 0;
    inter.rebuild();
    while (inter.subtour_count() > 1) {
        int u = 0;
        for (int c = 1; c < inter.subtour_count(); ++c)
            if (inter.component_edges(c) < inter.component_edges(u)) u = c;
        const auto cyc = inter.cycle_of(u);
        std::optional<Exchange> best;
        auto consider = [&](int a, int b, int c, int d) {
            const Length base = -static_cast<Length>(inst.distance(a, b)) - inst.distance(c, d);
            const Exchange x1{base + inst.distance(a, c) + inst.distance(b, d), a, b, c, d};
            const Exchange x2{base + inst.distance(a, d) + inst.distance(b, c), a, b, d, c};
            for (const auto& x : {x1, x2})
                if (!best || exchange_key(x) < exchange_key(*best)) best = x;
        };
        auto scan = [&](int top) {
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                for (int x : {a, b})
                    for (const auto& e : qt.view(x, top)) {
                        const int c = e.city;
                        if (inter.component(c) == u) continue;
                        for (int d : inter.neighbors(c)) consider(a, b, c, d);
                    }
            }
        };
        scan(opts.near);
        if (!best) scan(opts.wide);
        if (!best) {
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                for (int c = 0; c < inst.size(); ++c) {
                    if (inter.component(c) == u) continue;
                    for (int d : inter.neighbors(c)) consider(a, b, c, d);
                }
            }
        }
        const Exchange& x = *best;
        inter.relink(x.a, x.b, x.c);
        inter.relink(x.b, x.a, x.d);
        inter.relink(x.c, x.d, x.a);
        inter.relink(x.d, x.c, x.b);
        total += x.delta;
        inter.rebuild();
    }
    return total;
}

Tour materialize(const Intermediate& inter, const Instance& inst) {
    Tour t(inst, inter.to_order());
    return t;
}

// ------------------------------------------------------------------- block2

std::vector<int> block2_seed_order(const std::vector<ABCycle>& cycles, Rng& rng) {
    std::vector<int> eff;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (cycles[i].effective()) eff.push_back(static_cast<int>(i));
    std::shuffle(eff.begin(), eff.end(), rng);
    std::stable_sort(eff.begin(), eff.end(), [&](int x, int y) {
        return cycles[static_cast<std::size_t>(x)].edges() > cycles[static_cast<std::size_t>(y)].edges();
    });
    return eff;
}

namespace {

ESet block2_with(Intermediate& inter, const std::vector<ABCycle>& cycles, int seed, Rng& rng,
                 const Block2Options& opts) {
    const int n = inter.base().size();
    int effective = 0;
    for (const auto& c : cycles) effective += c.effective() ? 1 : 0;
    const int target = std::max(1, static_cast<int>(std::ceil(opts.beta * effective)));

    // city -> effective cycles through it (at most two)
    std::vector<std::array<int, 2>> through(static_cast<std::size_t>(n), {-1, -1});
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        if (!cycles[i].effective()) continue;
        for (int c : cycles[i].cities) {
            auto& t = through[static_cast<std::size_t>(c)];
            if (t[0] == static_cast<int>(i) || t[1] == static_cast<int>(i)) continue;
            (t[0] < 0 ? t[0] : t[1]) = static_cast<int>(i);
        }
    }
    std::vector<char> used(cycles.size(), 0);
    std::vector<char> queued(cycles.size(), 0);
    std::vector<int> frontier;
    auto extend_frontier = [&](int ci) {
        for (int c : cycles[static_cast<std::size_t>(ci)].cities)
            for (int o : through[static_cast<std::size_t>(c)])
                if (o >= 0 && !used[static_cast<std::size_t>(o)] && !queued[static_cast<std::size_t>(o)]) {
                    queued[static_cast<std::size_t>(o)] = 1;
                    frontier.push_back(o);
                }
    };

    ESet eset{seed};
    used[static_cast<std::size_t>(seed)] = 1;
    inter.reset();
    inter.apply_cycle(cycles[static_cast<std::size_t>(seed)]);
    extend_frontier(seed);
    std::vector<Intermediate::Override> snapshot;
    while (static_cast<int>(eset.size()) < target && !frontier.empty()) {
        std::shuffle(frontier.begin(), frontier.end(), rng);
        const auto tries = std::min(frontier.size(), static_cast<std::size_t>(opts.sample));
        snapshot.assign(inter.overrides().begin(), inter.overrides().end());
        std::size_t pick = 0;
        int best_sub = 0, best_edges = 0;
        for (std::size_t k = 0; k < tries; ++k) {
            const auto& cyc = cycles[static_cast<std::size_t>(frontier[k])];
            inter.apply_cycle(cyc);
            inter.rebuild();
            const int sub = inter.subtour_count();
            if (k == 0 || sub < best_sub || (sub == best_sub && cyc.edges() > best_edges)) {
                pick = k;
                best_sub = sub;
                best_edges = cyc.edges();
            }
            inter.load(snapshot);
        }
        const int chosen = frontier[pick];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
        used[static_cast<std::size_t>(chosen)] = 1;
        eset.push_back(chosen);
        inter.apply_cycle(cycles[static_cast<std::size_t>(chosen)]);
        extend_frontier(chosen);
    }
    return eset;
}

}  // namespace

ESet select_eset_block2(const Tour& a, const std::vector<ABCycle>& cycles, int seed, Rng& rng,
                        const Block2Options& opts) {
    Intermediate inter(a);
    return block2_with(inter, cycles, seed, rng, opts);
}

// ---------------------------------------------------------------- crossover

std::vector<Offspring> eax_offspring(const Instance& inst, const Tour& a, const Tour& b, Stage stage,
                                     const QTable& qt, Rng& rng, const CrossoverOptions& opts) {
    std::vector<Offspring> out;
    const auto cycles = partition_ab_cycles(a, b, rng);
    int effective = 0;
    for (const auto& c : cycles) effective += c.effective() ? 1 : 0;
    if (effective == 0) return out;
    const int count = std::min(opts.n_ch, effective);
    Intermediate inter(a);

    auto emit = [&](const ESet& eset) {
        inter.reset();
        inter.apply(cycles, eset);
        merge_subtours(inter, inst, qt, opts.merge);
        Offspring child;
        child.adj.assign(inter.overrides().begin(), inter.overrides().end());
        child.length = a.length() + inter.delta(inst);
        out.push_back(std::move(child));
    };

    if (stage == Stage::I) {
        SingleCycleSelector sel(cycles);
        for (int k = 0; k < count; ++k) {
            auto eset = sel.next(rng);
            if (!eset) break;
            emit(*eset);
        }
    } else {
        const auto seeds = block2_seed_order(cycles, rng);
        Intermediate work(a);
        for (int k = 0; k < count; ++k) {
            const ESet eset = block2_with(work, cycles, seeds[static_cast<std::size_t>(k) % seeds.size()], rng,
                                          opts.block2);
            emit(eset);
        }
    }
    return out;
}

Tour materialize(const Tour& a, const Offspring& child, const Instance& inst) {
    Intermediate inter(a);
    inter.load(child.adj);
    Tour t;
    t.assign_order(inter.to_order());
    t.set_length(child.length);
    (void)inst;
    return t;
}

std::vector<Tour> eax_crossover(const Instance& inst, const Tour& a, const Tour& b, Stage stage,
                                const QTable& qt, Rng& rng, const CrossoverOptions& opts) {
    std::vector<Tour> out;
    for (const auto& child : eax_offspring(inst, a, b, stage, qt, rng, opts))
        out.push_back(materialize(a, child, inst));
    return out;
}

// ------------------------------------------------------------------ entropy

int EdgeFrequency::get(int u, int v) const {
    for (const auto& [w, f] : rows_[static_cast<std::size_t>(u)])
        if (w == v) return f;
    return 0;
}

void EdgeFrequency::add(int u, int v, int delta) {
    auto bump = [&](int x, int y) {
        auto& row = rows_[static_cast<std::size_t>(x)];
        for (std::size_t k = 0; k < row.size(); ++k)
            if (row[k].first == y) {
                row[k].second += delta;
                if (row[k].second == 0) {
                    row[k] = row.back();
                    row.pop_back();
                }
                return;
            }
        row.emplace_back(y, delta);
    };
    bump(u, v);
    bump(v, u);
}

void EdgeFrequency::add_tour(std::span<const int> order, int delta) {
    const std::size_t n = order.size();
    for (std::size_t k = 0; k < n; ++k) add(order[k], order[(k + 1) % n], delta);
}

long long EdgeFrequency::total() const {
    long long s = 0;
    for (const auto& row : rows_)
        for (const auto& e : row) s += e.second;
    return s / 2;
}

bool EdgeFrequency::operator==(const EdgeFrequency& o) const {
    if (rows_.size() != o.rows_.size()) return false;
    for (std::size_t u = 0; u < rows_.size(); ++u) {
        auto x = rows_[u], y = o.rows_[u];
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        if (x != y) return false;
    }
    return true;
}

namespace {

double h(int f, int population) {
    if (f <= 0) return 0.0;
    const double p = static_cast<double>(f) / population;
    return -p * std::log(p);
}

}  // namespace

double EdgeFrequency::entropy(int population) const {
    double s = 0.0;
    for (std::size_t u = 0; u < rows_.size(); ++u)
        for (const auto& [v, f] : rows_[u])
            if (static_cast<std::size_t>(v) > u) s += h(f, population);
    return s;
}

EdgeDiff edge_diff(const Tour& a, std::span<const Intermediate::Override> child) {
    EdgeDiff d;
    for (const auto& o : child) {
        const int x = o.city;
        const int p = a.prev(x), q = a.next(x);
        for (int y : {p, q})
            if (x < y && o.adj[0] != y && o.adj[1] != y) d.removed.emplace_back(x, y);
        for (int y : o.adj)
            if (x < y && y != p && y != q) d.added.emplace_back(x, y);
    }
    return d;
}

EdgeDiff edge_diff(const Tour& a, const Tour& child) {
    EdgeDiff d;
    for (int x = 0; x < a.size(); ++x) {
        const int p = a.prev(x), q = a.next(x);
        const int cp = child.prev(x), cq = child.next(x);
        for (int y : {p, q})
            if (x < y && cp != y && cq != y) d.removed.emplace_back(x, y);
        for (int y : {cp, cq})
            if (x < y && y != p && y != q) d.added.emplace_back(x, y);
    }
    return d;
}

double entropy_loss(const EdgeFrequency& freq, int population, const EdgeDiff& diff) {
    double gain = 0.0;
    for (const auto& [u, v] : diff.removed) {
        const int f = freq.get(u, v);
        gain += h(f - 1, population) - h(f, population);
    }
    for (const auto& [u, v] : diff.added) {
        const int f = freq.get(u, v);
        gain += h(f + 1, population) - h(f, population);
    }
    return -gain;
}

std::optional<std::size_t> pick_survivor(std::span<const Length> lengths, std::span<const EdgeDiff> diffs,
                                         Length parent_length, const EdgeFrequency& freq, int population,
                                         SurvivorMode mode) {
    constexpr double kEps = 1e-9;
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] >= parent_length) continue;
        double score;
        if (mode == SurvivorMode::Length) {
            score = static_cast<double>(parent_length - lengths[i]);
        } else {
            const double loss = entropy_loss(freq, population, diffs[i]);
            score = static_cast<double>(parent_length - lengths[i]) / std::max(loss, kEps);
        }
        if (!best || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

// --------------------------------------------------------------- population

Population::Population(int n, std::vector<Tour> tours) : individuals(std::move(tours)), freq(n) {
    for (const auto& t : individuals) freq.add_tour(t.order(), 1);
}

void Population::replace(int i, Tour t) {
    auto& slot = individuals[static_cast<std::size_t>(i)];
    freq.add_tour(slot.order(), -1);
    freq.add_tour(t.order(), 1);
    slot = std::move(t);
}

int Population::best_index(int from) const {
    int best = from;
    for (int i = from + 1; i < size(); ++i)
        if ((*this)[i].length() < (*this)[best].length()) best = i;
    return best;
}

Length Population::best_length(int from) const { return (*this)[best_index(from)].length(); }

bool Population::consistent() const {
    if (individuals.empty()) return true;
    EdgeFrequency fresh(individuals.front().size());
    for (const auto& t : individuals) fresh.add_tour(t.order(), 1);
    return fresh == freq;
}

Population init_population(const Instance& inst, int n_pop, const std::vector<std::vector<int>>& candidates,
                           Rng& rng) {
    std::vector<Tour> tours;
    tours.reserve(static_cast<std::size_t>(n_pop));
    for (int i = 0; i < n_pop; ++i) tours.push_back(greedy_2opt_init(inst, candidates, rng));
    return Population(inst.size(), std::move(tours));
}

std::optional<Tour> select_survivor(const std::vector<Tour>& children, const Tour& parent, Population& pop,
                                    int slot, SurvivorMode mode) {
    std::vector<Length> lengths;
    std::vector<EdgeDiff> diffs;
    for (const auto& c : children) {
        lengths.push_back(c.length());
        diffs.push_back(edge_diff(parent, c));
    }
    auto pick = pick_survivor(lengths, diffs, parent.length(), pop.freq, pop.size(), mode);
    if (!pick) return std::nullopt;
    pop.replace(slot, children[*pick]);
    return children[*pick];
}

}  // namespace rhga
