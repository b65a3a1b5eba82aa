#include "gld/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gld {

SortedKeySet::SortedKeySet(std::vector<key_t> keys, std::optional<std::pair<key_t, key_t>> universe)
    : keys_(std::move(keys)), universe_(universe) {
    for (std::size_t i = 1; i < keys_.size(); ++i) {
        if (keys_[i - 1] >= keys_[i])
            throw std::invalid_argument("keys not strictly increasing at index " + std::to_string(i));
    }
    if (universe_) set_universe_hint(*universe_);
}

SortedKeySet SortedKeySet::from_unsorted(std::vector<key_t> keys, std::size_t* duplicates_removed) {
    std::sort(keys.begin(), keys.end());
    const std::size_t before = keys.size();
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (duplicates_removed) *duplicates_removed = before - keys.size();
    return SortedKeySet(std::move(keys));
}

void SortedKeySet::set_universe_hint(std::pair<key_t, key_t> u) {
    if (u.first > u.second) throw std::invalid_argument("universe lower bound above upper bound");
    if (!keys_.empty() && (keys_.front() < u.first || keys_.back() > u.second))
        throw std::invalid_argument("keys outside the universe hint");
    universe_ = u;
}

std::pair<key_t, key_t> SortedKeySet::universe() const {
    if (universe_) return *universe_;
    if (keys_.empty()) throw std::logic_error("universe of an empty key set");
    return {keys_.front(), keys_.back()};
}

GapStats gap_stats(std::span<const key_t> keys) {
    if (keys.size() < 2) throw std::invalid_argument("insufficient keys for gaps");
    GapStats g{std::numeric_limits<key_t>::max(), 0};
    for (std::size_t i = 1; i < keys.size(); ++i) {
        const key_t gap = keys[i] - keys[i - 1];
        g.g_min = std::min(g.g_min, gap);
        g.g_max = std::max(g.g_max, gap);
    }
    if (g.g_min == 0) throw std::invalid_argument("duplicate keys");
    return g;
}

AccessDistribution::AccessDistribution(std::vector<double> p, std::vector<double> q)
    : p_(std::move(p)), q_(std::move(q)) {
    if (q_.size() != p_.size() + 1) throw std::invalid_argument("failure probabilities must number n+1");
    double total = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw std::invalid_argument("negative or NaN probability");
        total += v;
    }
    for (double v : q_) {
        if (!(v >= 0.0)) throw std::invalid_argument("negative or NaN probability");
        total += v;
    }
    if (std::abs(total - 1.0) > kTolerance)
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
}

namespace {
double plogp_sum(std::span<const double> v) {
    double h = 0.0;
    for (double x : v)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}
}  // namespace

double entropy(const AccessDistribution& dist) { return plogp_sum(dist.p()) + plogp_sum(dist.q()); }

double entropy_of_weights(std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double w : weights) {
        if (w <= 0.0) continue;
        const double x = w / total;
        h -= x * std::log2(x);
    }
    return h;
}

SearchOutcome oracle_rank_search(std::span<const key_t> keys, key_t x) {
    std::size_t i = 0;
    while (i < keys.size() && keys[i] < x) ++i;
    return {i, i < keys.size() && keys[i] == x};
}

void require_rank_capacity(std::size_t n) {
    if (n >= std::numeric_limits<rank_t>::max())
        throw std::length_error("key sets of 2^32-1 or more keys are not supported");
}

}  // namespace gld
