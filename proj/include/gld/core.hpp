#pragma once

// Shared domain types for the generic learned dictionaries: key sets, search
// outcomes, gap statistics and access distributions.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gld {

using key_t = std::uint64_t;

/// Ranks stored inside partitions. Sets with 2^32 or more keys are rejected at
/// build time.
using rank_t = std::uint32_t;

/// Result of a lower-bound search: `rank` is the index of the smallest key
/// >= the query, `size()` meaning past the end.
struct SearchOutcome {
    std::size_t rank = 0;
    bool found = false;

    friend bool operator==(const SearchOutcome&, const SearchOutcome&) = default;
};

/// Strictly increasing set of unsigned 64-bit keys.
class SortedKeySet {
public:
    SortedKeySet() = default;

    /// Takes ownership of `keys`; throws std::invalid_argument unless strictly
    /// increasing.
    explicit SortedKeySet(std::vector<key_t> keys,
                          std::optional<std::pair<key_t, key_t>> universe = std::nullopt);

    /// Sorts and deduplicates. `duplicates_removed` receives the number of
    /// dropped entries when non-null.
    static SortedKeySet from_unsorted(std::vector<key_t> keys, std::size_t* duplicates_removed = nullptr);

    std::span<const key_t> keys() const noexcept { return keys_; }
    std::size_t size() const noexcept { return keys_.size(); }
    bool empty() const noexcept { return keys_.empty(); }
    key_t operator[](std::size_t i) const noexcept { return keys_[i]; }
    key_t front() const { return keys_.front(); }
    key_t back() const { return keys_.back(); }

    const std::optional<std::pair<key_t, key_t>>& universe_hint() const noexcept { return universe_; }
    void set_universe_hint(std::pair<key_t, key_t> u);

    /// Closed universe bounds: the hint when present, else [front, back].
    std::pair<key_t, key_t> universe() const;

    /// Releases the key vector (the set becomes empty).
    std::vector<key_t> release() && { return std::move(keys_); }

    auto begin() const noexcept { return keys_.begin(); }
    auto end() const noexcept { return keys_.end(); }

private:
    std::vector<key_t> keys_;
    std::optional<std::pair<key_t, key_t>> universe_;
};

/// Minimum and maximum consecutive gap. The ratio is kept as the exact pair
/// (g_max, g_min); `delta()` is the derived float.
struct GapStats {
    key_t g_min = 0;
    key_t g_max = 0;

    double delta() const noexcept { return static_cast<double>(g_max) / static_cast<double>(g_min); }
};

GapStats gap_stats(std::span<const key_t> keys);
inline GapStats gap_stats(const SortedKeySet& keys) { return gap_stats(keys.keys()); }

/// Success probabilities p[0..n) for each key and failure probabilities
/// q[0..n] for the n+1 gaps (q[0] below the minimum, q[n] above the maximum).
class AccessDistribution {
public:
    static constexpr double kTolerance = 1e-12;

    AccessDistribution() = default;
    /// Throws std::invalid_argument on negative entries, size mismatch, or a
    /// total outside 1 +- kTolerance.
    AccessDistribution(std::vector<double> p, std::vector<double> q);

    std::span<const double> p() const noexcept { return p_; }
    std::span<const double> q() const noexcept { return q_; }
    std::size_t size() const noexcept { return p_.size(); }

private:
    std::vector<double> p_;
    std::vector<double> q_;
};

/// -sum x log2 x over every p and q entry; zero entries contribute nothing.
double entropy(const AccessDistribution& dist);

/// Entropy of an arbitrary nonnegative weight vector normalized by its sum.
double entropy_of_weights(std::span<const double> weights);

/// Linear scan. Ground truth for every dictionary test.
SearchOutcome oracle_rank_search(std::span<const key_t> keys, key_t x);

/// Value and membership answers derived from a rank outcome.
inline std::optional<key_t> predecessor(std::span<const key_t> keys, const SearchOutcome& o) {
    if (o.found) return keys[o.rank];
    if (o.rank == 0) return std::nullopt;
    return keys[o.rank - 1];
}

/// Keys in [lo, hi] as two rank searches plus a slice.
template <class Searcher>
std::span<const key_t> range_query(std::span<const key_t> keys, key_t lo, key_t hi, Searcher&& search) {
    if (hi < lo) return {};
    const std::size_t first = search(lo).rank;
    SearchOutcome last = search(hi);
    const std::size_t end = last.found ? last.rank + 1 : last.rank;
    return keys.subspan(first, end - first);
}

/// A static sorted-set dictionary.
template <class D>
concept StaticDictionary = requires(const D& d, key_t x) {
    { d.rank_search(x) } -> std::same_as<SearchOutcome>;
    { d.space_bytes() } -> std::convertible_to<std::size_t>;
    { d.size() } -> std::convertible_to<std::size_t>;
};

/// A dictionary whose queries mutate it (self-adjusting). Queries require
/// exclusive access.
template <class D>
concept SelfAdjustingDictionary = requires(D& d, key_t x) {
    { d.rank_search(x) } -> std::same_as<SearchOutcome>;
    { d.space_bytes() } -> std::convertible_to<std::size_t>;
} && !StaticDictionary<D>;

template <class D>
concept DynamicDictionary = requires(D& d, key_t x) {
    { d.rank_search(x) } -> std::same_as<SearchOutcome>;
    { d.insert(x) } -> std::same_as<bool>;
    { d.erase(x) } -> std::same_as<bool>;
};

/// Throws when the set is too large for 32-bit ranks.
void require_rank_capacity(std::size_t n);

}  // namespace gld
