#include "rhga/lk_search.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace rhga {

namespace {

constexpr int kMaxDepth = 16;

// Segment walk of a sequential move. Slots 2r / 2r+1 are the left / right
// city of the r-th cut in position order.
struct Closure {
    int k = 0;
    std::array<int, kMaxDepth> cut{};       // sorted cut positions (after position cut[r])
    std::array<int, kMaxDepth> seg{};       // visiting order of segments
    std::array<bool, kMaxDepth> forward{};  // direction per visit
    bool ok = false;
};

Closure walk(const Tour& t, std::span<const int> p) {
    Closure c;
    const int n = t.size();
    const int k = static_cast<int>(p.size() / 2);
    c.k = k;
    if (k < 1 || k > kMaxDepth || p.size() % 2 != 0) return c;

    std::array<int, kMaxDepth> raw{};
    std::array<int, kMaxDepth> left_city{};
    for (int j = 0; j < k; ++j) {
        const int a = p[static_cast<std::size_t>(2 * j)];
        const int b = p[static_cast<std::size_t>(2 * j + 1)];
        if (t.next(a) == b) {
            raw[static_cast<std::size_t>(j)] = t.position(a);
            left_city[static_cast<std::size_t>(j)] = a;
        } else if (t.prev(a) == b) {
            raw[static_cast<std::size_t>(j)] = t.position(b);
            left_city[static_cast<std::size_t>(j)] = b;
        } else {
            return c;
        }
    }
    std::array<int, kMaxDepth> rank{};
    for (int j = 0; j < k; ++j) c.cut[static_cast<std::size_t>(j)] = raw[static_cast<std::size_t>(j)];
    std::sort(c.cut.begin(), c.cut.begin() + k);
    for (int r = 1; r < k; ++r)
        if (c.cut[static_cast<std::size_t>(r)] == c.cut[static_cast<std::size_t>(r - 1)]) return c;
    for (int j = 0; j < k; ++j)
        rank[static_cast<std::size_t>(j)] = static_cast<int>(
            std::lower_bound(c.cut.begin(), c.cut.begin() + k, raw[static_cast<std::size_t>(j)]) - c.cut.begin());

    // slot of the city at either end of removed edge j
    auto slot = [&](int j, int city) {
        return 2 * rank[static_cast<std::size_t>(j)] + (city == left_city[static_cast<std::size_t>(j)] ? 0 : 1);
    };
    std::array<int, 2 * kMaxDepth> mate{};
    for (int j = 0; j < k; ++j) {
        const int from = p[static_cast<std::size_t>(2 * j + 1)];
        const int jn = (j + 1) % k;
        const int to = p[static_cast<std::size_t>(2 * jn)];
        const int s1 = slot(j, from), s2 = slot(jn, to);
        mate[static_cast<std::size_t>(s1)] = s2;
        mate[static_cast<std::size_t>(s2)] = s1;
    }
    (void)n;
    int cur = 1;
    int count = 0;
    do {
        int s, exit;
        bool fwd;
        if (cur % 2 == 1) {
            s = cur / 2;
            exit = 2 * ((s + 1) % k);
            fwd = true;
        } else {
            s = (cur / 2 - 1 + k) % k;
            exit = 2 * s + 1;
            fwd = false;
        }
        if (count == k) return c;
        c.seg[static_cast<std::size_t>(count)] = s;
        c.forward[static_cast<std::size_t>(count)] = fwd;
        ++count;
        cur = mate[static_cast<std::size_t>(exit)];
    } while (cur != 1);
    c.ok = count == k;
    return c;
}

struct Search {
    const Instance& inst;
    Tour& t;
    const QTable& qt;
    Rng& rng;
    int k_max;
    int breadth;
    std::vector<int> p;
    Length gain = 0;

    bool run(int k, Length gsum) {
        const int last = p.back();
        std::array<int, 2> nb{t.prev(last), t.next(last)};
        if (rng() & 1) std::swap(nb[0], nb[1]);
        for (int x : nb) {
            p.push_back(x);
            if (k >= 2 && !closes_to_tour(t, p)) {
                p.pop_back();
                continue;
            }
            const Length g = gsum + inst.distance(last, x);
            if (k >= 2 && g - inst.distance(x, p.front()) > 0) {
                gain = g - inst.distance(x, p.front());
                apply_sequential_move(t, p);
                t.set_length(t.length() - gain);
                return true;
            }
            if (k == k_max) {
                p.pop_back();
                return false;
            }
            for (const auto& e : qt.view(x, breadth)) {
                const int y = e.city;
                if (y == t.next(x) || y == t.prev(x)) continue;
                const Length g2 = g - inst.distance(x, y);
                if (g2 <= 0) continue;
                p.push_back(y);
                if (run(k + 1, g2)) return true;
                p.pop_back();
            }
            p.pop_back();
        }
        return false;
    }
};

}  // namespace

bool closes_to_tour(const Tour& t, std::span<const int> p) { return walk(t, p).ok; }

void apply_sequential_move(Tour& t, std::span<const int> p) {
    const Closure c = walk(t, p);
    assert(c.ok);
    const int n = t.size();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < c.k; ++v) {
        const int s = c.seg[static_cast<std::size_t>(v)];
        const int from = c.cut[static_cast<std::size_t>(s)] + 1;
        int to = c.cut[static_cast<std::size_t>((s + 1) % c.k)];
        if (to < from) to += n;
        if (c.forward[static_cast<std::size_t>(v)]) {
            for (int q = from; q <= to; ++q) order.push_back(t.at(q % n));
        } else {
            for (int q = to; q >= from; --q) order.push_back(t.at(q % n));
        }
    }
    t.assign_order(std::move(order));
}

KOptEpisode k_opt(const Instance& inst, Tour& t, int p1, const QTable& qt, int k_max, Rng& rng,
                  int breadth) {
    Search s{inst, t, qt, rng, std::min(k_max, kMaxDepth), breadth, {}, 0};
    s.p.reserve(static_cast<std::size_t>(2 * k_max + 2));
    s.p.push_back(p1);
    KOptEpisode ep;
    if (s.run(1, 0)) {
        ep.path = std::move(s.p);
        ep.improved = true;
        ep.gain = s.gain;
    }
    return ep;
}

QLkhStats q_lkh(const Instance& inst, Tour& t, QTable& qt, const QLkhOptions& opts, Rng& rng) {
    const int n = t.size();
    std::vector<int> active(static_cast<std::size_t>(n));
    std::vector<char> in_active(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;
    QLkhStats stats;
    while (!active.empty()) {
        if (opts.deadline && (stats.episodes & 63) == 0 && std::chrono::steady_clock::now() > *opts.deadline) {
            stats.interrupted = true;
            break;
        }
        const auto pick = static_cast<std::size_t>(rand_below(rng, static_cast<int>(active.size())));
        const int p1 = active[pick];
        active[pick] = active.back();
        active.pop_back();
        in_active[static_cast<std::size_t>(p1)] = 0;

        KOptEpisode ep = k_opt(inst, t, p1, qt, opts.k_max, rng, opts.breadth);
        ++stats.episodes;
        if (ep.path.empty()) continue;
        if (opts.learn) qt.update(inst, ep.path, opts.lambda, opts.gamma, opts.bootstrap);
        if (ep.improved) {
            ++stats.improvements;
            for (int c : ep.path)
                if (!in_active[static_cast<std::size_t>(c)]) {
                    in_active[static_cast<std::size_t>(c)] = 1;
                    active.push_back(c);
                }
        }
    }
    if (opts.learn) qt.resort();
    return stats;
}

}  // namespace rhga
