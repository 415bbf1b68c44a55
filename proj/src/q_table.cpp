#include "rhga/q_table.hpp"

#include <algorithm>
#include <iomanip>
#include <string>

namespace rhga {

QTable::QTable(std::vector<std::vector<QEntry>> lists, double lower_bound)
    : lists_(std::move(lists)), lower_bound_(lower_bound) {
    resort();
}

QTable QTable::by_distance(const Instance& inst, int K) {
    const auto nn = nearest_neighbors(inst, K);
    std::vector<std::vector<QEntry>> lists(nn.size());
    for (std::size_t i = 0; i < nn.size(); ++i)
        for (int j : nn[i]) lists[i].push_back({j, -static_cast<double>(inst.distance(static_cast<int>(i), j))});
    return QTable(std::move(lists));
}

QTable QTable::by_alpha(const std::vector<std::vector<AlphaEntry>>& alpha, int K) {
    std::vector<std::vector<QEntry>> lists(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const auto take = std::min(alpha[i].size(), static_cast<std::size_t>(K));
        for (std::size_t k = 0; k < take; ++k) lists[i].push_back({alpha[i][k].city, -alpha[i][k].alpha});
    }
    return QTable(std::move(lists));
}

QTable QTable::initial(const Instance& inst, const std::vector<std::vector<AlphaEntry>>& alpha,
                       double lower_bound, int K) {
    const int n = inst.size();
    // Coincident cities with alpha 0 make the quotient undefined; they get a
    // value above any regular entry.
    const double eps = 1e-6 * (lower_bound / n);
    std::vector<std::vector<QEntry>> lists(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (const auto& a : alpha[i]) {
            const double denom = a.alpha + inst.distance(static_cast<int>(i), a.city);
            const double q = denom > 0.0 ? lower_bound / denom : lower_bound / (eps > 0.0 ? eps : 1e-300);
            lists[i].push_back({a.city, q});
        }
        // Keep the K best by q; ties keep alpha order.
        std::stable_sort(lists[i].begin(), lists[i].end(),
                         [](const QEntry& x, const QEntry& y) { return x.q > y.q; });
        if (lists[i].size() > static_cast<std::size_t>(K)) lists[i].resize(static_cast<std::size_t>(K));
    }
    return QTable(std::move(lists), lower_bound);
}

std::vector<int> QTable::candidate_view(int city, int top) const {
    std::vector<int> out;
    for (const auto& e : view(city, top)) out.push_back(e.city);
    return out;
}

std::vector<std::vector<int>> QTable::neighbor_lists(int top) const {
    std::vector<std::vector<int>> out(lists_.size());
    for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = candidate_view(i, top);
    return out;
}

QEntry& QTable::entry(int i, int j) {
    for (auto& e : lists_[static_cast<std::size_t>(i)])
        if (e.city == j) return e;
    throw PairNotInCandidates("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is not in the candidate list");
}

double QTable::q(int i, int j) const { return const_cast<QTable*>(this)->entry(i, j).q; }

double QTable::max_q(int city) const {
    const auto& l = lists_[static_cast<std::size_t>(city)];
    if (l.empty()) return 0.0;
    double best = l.front().q;
    for (const auto& e : l) best = std::max(best, e.q);
    return best;
}

void QTable::update(const Instance& inst, std::span<const int> p, double lambda, double gamma,
                    Bootstrap mode) {
    const std::size_t m = p.size() / 2;
    if (p.size() % 2 != 0 || m < 2) return;
    // p is 1-based in the formula: p_{2k} is p[2k-1] here.
    for (std::size_t k = 1; k + 1 <= m; ++k) {
        const int prev = p[2 * k - 2];
        const int state = p[2 * k - 1];
        const int action = p[2 * k];
        const int succ = p[2 * k + 1];
        const double r = static_cast<double>(inst.distance(prev, state)) -
                         static_cast<double>(inst.distance(state, action));
        const bool last = k + 1 == m;
        const double boot = (last && mode == Bootstrap::None) ? 0.0 : gamma * max_q(succ);
        QEntry& e = entry(state, action);
        e.q = (1.0 - lambda) * e.q + lambda * (r + boot);
    }
}

void QTable::resort() {
    for (auto& l : lists_)
        std::stable_sort(l.begin(), l.end(), [](const QEntry& a, const QEntry& b) { return a.q > b.q; });
}

bool QTable::is_sorted() const {
    for (const auto& l : lists_)
        for (std::size_t k = 1; k < l.size(); ++k)
            if (l[k - 1].q < l[k].q) return false;
    return true;
}

void QTable::dump(const Instance& inst, std::ostream& out) const {
    out << std::setprecision(17);
    for (int i = 0; i < size(); ++i)
        for (const auto& e : list(i)) out << inst.label(i) << ' ' << inst.label(e.city) << ' ' << e.q << '\n';
}

}  // namespace rhga
