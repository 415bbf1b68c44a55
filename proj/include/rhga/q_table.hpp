#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rhga/instance.hpp"
#include "rhga/one_tree.hpp"

namespace rhga {

struct QEntry {
    int city;
    double q;
};

class PairNotInCandidates : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// How the last state-action pair of an episode bootstraps.
enum class Bootstrap {
    Successor,  // max over the list of p_{2k+2}, which is the last path city
    None,       // drop the discounted term for the last pair
};

/// Per-city candidate lists ranked by Q, highest first. Q(i,j) and Q(j,i)
/// are independent entries.
class QTable {
public:
    static constexpr int kDefaultCapacity = 25;

    QTable() = default;
    /// Lists are taken as given and then sorted (stable) by q descending.
    explicit QTable(std::vector<std::vector<QEntry>> lists, double lower_bound = 0.0);

    /// Q = -d: ranks candidates by distance.
    static QTable by_distance(const Instance& inst, int K = kDefaultCapacity);
    /// Q = -alpha: ranks candidates by alpha (list order kept on ties).
    static QTable by_alpha(const std::vector<std::vector<AlphaEntry>>& alpha, int K = kDefaultCapacity);
    /// Q = L(T) / (alpha + d).
    static QTable initial(const Instance& inst, const std::vector<std::vector<AlphaEntry>>& alpha,
                          double lower_bound, int K = kDefaultCapacity);

    int size() const noexcept { return static_cast<int>(lists_.size()); }
    double lower_bound() const noexcept { return lower_bound_; }
    std::span<const QEntry> list(int city) const { return lists_[static_cast<std::size_t>(city)]; }
    /// First min(top, list length) entries of `city`.
    std::span<const QEntry> view(int city, int top) const {
        auto l = list(city);
        return l.first(std::min<std::size_t>(l.size(), static_cast<std::size_t>(top)));
    }
    /// Neighbor cities of the view, as plain indices.
    std::vector<int> candidate_view(int city, int top) const;
    /// Top-`top` neighbor lists of every city.
    std::vector<std::vector<int>> neighbor_lists(int top) const;

    /// Throws PairNotInCandidates when j is not stored for i.
    double q(int i, int j) const;
    double max_q(int city) const;

    /// Q-learning update over an episode p = (p1..p2m): for k = 1..m-1 the pair
    /// (p_{2k}, p_{2k+1}) receives r_k = d(p_{2k-1},p_{2k}) - d(p_{2k},p_{2k+1})
    /// bootstrapped from the best entry of p_{2k+2}. Sequential, in place.
    void update(const Instance& inst, std::span<const int> episode, double lambda, double gamma,
                Bootstrap mode = Bootstrap::Successor);

    /// Stable sort of every list by q descending.
    void resort();
    bool is_sorted() const;

    /// "i j q" per line with file labels.
    void dump(const Instance& inst, std::ostream& out) const;

    /// Direct access for tests.
    std::vector<QEntry>& mutable_list(int city) { return lists_[static_cast<std::size_t>(city)]; }

private:
    QEntry& entry(int i, int j);

    std::vector<std::vector<QEntry>> lists_;
    double lower_bound_ = 0.0;
};

}  // namespace rhga
