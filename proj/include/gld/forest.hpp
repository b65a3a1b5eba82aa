#pragma once

// Learned binary search forest: the keys are binned, each bin gets a binary
// search tree built for its share of the access distribution, and a query
// pays one routing step plus the comparisons in its bin's tree.
//
// Tree cost convention, for keys p[0..m) and leaves q[0..m]:
//   C(T) = sum p_i * (depth(key i) + 1) + sum q_j * depth(leaf j)
// where a leaf's depth is the number of keys on its root path. Costs are
// kept relative to the raw (unnormalized) weights.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gld/binning.hpp"
#include "gld/core.hpp"

namespace gld {

enum class ForestMode { Exact, Approx };

/// Roots for every subrange of keys [i, j), stored as a triangle over
/// 0 <= i <= j <= m. Empty subranges hold no root.
class RootTable {
public:
    RootTable() = default;
    explicit RootTable(std::size_t m) : m_(m), roots_((m + 1) * (m + 2) / 2, kNone) {}

    static constexpr std::uint32_t kNone = UINT32_MAX;

    std::size_t keys() const noexcept { return m_; }
    std::uint32_t& at(std::size_t i, std::size_t j) noexcept { return roots_[index(i, j)]; }
    std::uint32_t at(std::size_t i, std::size_t j) const noexcept { return roots_[index(i, j)]; }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        // row i holds j = i..m
        return i * (m_ + 1) - i * (i - 1) / 2 + (j - i);
    }
    std::size_t m_ = 0;
    std::vector<std::uint32_t> roots_;
};

struct BstPlan {
    RootTable roots;                       // every subrange's root (Exact only; empty for Approx)
    double weight = 0.0;                   // sum p + sum q
    double cost = 0.0;                     // C(T) over the raw weights
    std::vector<std::uint32_t> key_depth;  // m entries
    std::vector<std::uint32_t> leaf_depth; // m + 1 entries

    std::size_t size() const noexcept { return key_depth.size(); }
    /// C(T) / weight, or 0 for a weightless tree.
    double normalized_cost() const noexcept { return weight > 0.0 ? cost / weight : 0.0; }
};

/// Optimal tree by the quadratic dynamic program with Knuth's root bounds.
/// Throws std::invalid_argument unless q.size() == p.size() + 1 and all
/// weights are nonnegative.
BstPlan optimal_bst(std::span<const double> p, std::span<const double> q);

/// Weight-balanced tree: each root splits its subrange's weight as evenly as
/// possible (binary search on prefix sums). O(m log m).
BstPlan approx_bst(std::span<const double> p, std::span<const double> q);

/// C(T) recomputed from the plan's depths.
double cost_from_depths(std::span<const double> p, std::span<const double> q, const BstPlan& plan);

/// Share of the access distribution landing in one bin.
struct BinMass {
    std::size_t first_rank = 0;
    std::vector<double> p;  // keys of the bin
    std::vector<double> q;  // p.size() + 1 leaves; ends hold the bin's share of boundary gaps
    double weight = 0.0;
};

/// Splits the distribution over the k equal-width bins of `keys`. Failure
/// mass of a gap crossing bin borders is shared in proportion to the overlap
/// of the gap with each bin's range; mass below the first key goes to the
/// first bin and above the last key to the last bin.
std::vector<BinMass> bin_weights(std::span<const key_t> keys, std::size_t k, const AccessDistribution& dist);

struct ForestPlan {
    std::size_t k = 0;
    ForestMode mode = ForestMode::Exact;
    std::vector<double> weights;
    std::vector<BstPlan> trees;
    double total_cost = 0.0;
};

/// sum over bins of W * (1 + C(T)/W); empty bins pay the routing step only.
double forest_cost(const ForestPlan& plan);

ForestPlan build_forest(std::span<const key_t> keys, const AccessDistribution& dist, std::size_t k, ForestMode mode);

struct ForestSweep {
    std::vector<double> cost_by_k;  // entry k - 1
    ForestPlan best;
};

/// Evaluates every k in [1, k_max] and keeps the cheapest (smallest k on
/// ties within 1e-9).
ForestSweep optimize_over_k(std::span<const key_t> keys, const AccessDistribution& dist, std::size_t k_max,
                            ForestMode mode);

/// Access distributions over n keys by name:
///   uniform       p = 1/n, q = 0
///   uniform-gaps  every p and q equal
///   random        independent uniform weights, normalized
///   zipf:S        weights 1/r^S over the 2n+1 slots in random order
AccessDistribution synthetic_distribution(std::size_t n, std::string_view spec, std::uint64_t seed);

}  // namespace gld
