#pragma once

// The sorted-set dictionaries used as final-stage search structures.
//
// A learned model partitions the keys into contiguous rank intervals and
// needs one dictionary per interval. A "dictionary set" builds all of them at
// once from the interval bounds:
//
//   - ArrayDictionarySet<Layout> keeps every interval's layout (a permutation
//     of its keys) in one arena addressed by the rank bounds, plus optional
//     auxiliary keys (CSS separators) in a second arena;
//   - SplayDictionarySet keeps one splay tree per interval in a shared pool.
//
// A plain dictionary is a set with a single interval.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "gld/core.hpp"
#include "gld/search.hpp"
#include "gld/splay_tree.hpp"

namespace gld {

struct DictParams {
    std::size_t btree_block = kCacheLineKeys;  // keys per BFT node
};

namespace layouts {

// Each layout policy provides:
//   id, self_adjusting = false,
//   aux_size(n, params)                  auxiliary keys needed for n keys,
//   arrange(sorted, layout, aux, params) fill layout (same length) and aux,
//   search(layout, aux, x, params)       lower-bound outcome within the slice.

struct Bbs {
    static constexpr std::string_view id = "bbs";
    static std::size_t aux_size(std::size_t, const DictParams&) { return 0; }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t>, const DictParams&) {
        std::copy(sorted.begin(), sorted.end(), layout.begin());
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t>, key_t x,
                                const DictParams&) noexcept {
        return search_bbs(layout, x);
    }
};

struct Bfs {
    static constexpr std::string_view id = "bfs";
    static std::size_t aux_size(std::size_t, const DictParams&) { return 0; }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t>, const DictParams&) {
        std::copy(sorted.begin(), sorted.end(), layout.begin());
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t>, key_t x,
                                const DictParams&) noexcept {
        return search_bfs(layout, x);
    }
};

struct Interpolation {
    static constexpr std::string_view id = "is";
    static std::size_t aux_size(std::size_t, const DictParams&) { return 0; }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t>, const DictParams&) {
        std::copy(sorted.begin(), sorted.end(), layout.begin());
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t>, key_t x,
                                const DictParams&) noexcept {
        return search_is(layout, x);
    }
};

struct Eytzinger {
    static constexpr std::string_view id = "bfe";
    static std::size_t aux_size(std::size_t, const DictParams&) { return 0; }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t>, const DictParams&) {
        eytzinger_arrange(sorted, layout);
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t>, key_t x,
                                const DictParams&) noexcept {
        return eytzinger_search(layout, x);
    }
};

struct BTree {
    static constexpr std::string_view id = "bft";
    static std::size_t aux_size(std::size_t, const DictParams&) { return 0; }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t>,
                        const DictParams& params) {
        btree_arrange(sorted, layout, params.btree_block);
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t>, key_t x,
                                const DictParams& params) noexcept {
        return btree_search(layout, params.btree_block, x);
    }
};

struct Css {
    static constexpr std::string_view id = "css";
    static std::size_t aux_size(std::size_t n, const DictParams&) { return CssShape(n).separator_count(); }
    static void arrange(std::span<const key_t> sorted, std::span<key_t> layout, std::span<key_t> aux,
                        const DictParams&) {
        std::copy(sorted.begin(), sorted.end(), layout.begin());
        css_arrange_separators(sorted, aux);
    }
    static SearchOutcome search(std::span<const key_t> layout, std::span<const key_t> aux, key_t x,
                                const DictParams&) noexcept {
        return css_search(layout, aux, x);
    }
};

}  // namespace layouts

/// Interval bounds: bounds[i] is the first rank of interval i; the last entry
/// is n.
std::vector<rank_t> single_interval(std::size_t n);

template <class Layout>
class ArrayDictionarySet {
public:
    static constexpr bool self_adjusting = false;
    static constexpr std::string_view id = Layout::id;

    ArrayDictionarySet() = default;
    ArrayDictionarySet(std::span<const key_t> sorted, std::vector<rank_t> bounds, DictParams params = {})
        : bounds_(std::move(bounds)), params_(params) {
        require_rank_capacity(sorted.size());
        if (bounds_.empty() || bounds_.front() != 0 || bounds_.back() != sorted.size())
            throw std::invalid_argument("interval bounds must start at 0 and end at n");
        if (Layout::id == layouts::BTree::id && params_.btree_block == 0)
            throw std::invalid_argument("B-tree block size must be at least 1");
        layout_.resize(sorted.size());
        const std::size_t m = intervals();
        if (has_aux()) {
            aux_bounds_.resize(m + 1);
            std::size_t total = 0;
            for (std::size_t i = 0; i < m; ++i) {
                aux_bounds_[i] = total;
                total += Layout::aux_size(bounds_[i + 1] - bounds_[i], params_);
            }
            aux_bounds_[m] = total;
            aux_.resize(total);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t lo = bounds_[i], hi = bounds_[i + 1];
            if (hi < lo) throw std::invalid_argument("interval bounds must be nondecreasing");
            Layout::arrange(sorted.subspan(lo, hi - lo), std::span<key_t>(layout_).subspan(lo, hi - lo), aux_of(i),
                            params_);
        }
    }

    std::size_t size() const noexcept { return layout_.size(); }
    std::size_t intervals() const noexcept { return bounds_.size() - 1; }
    std::size_t interval_start(std::size_t i) const noexcept { return bounds_[i]; }
    std::size_t interval_size(std::size_t i) const noexcept { return bounds_[i + 1] - bounds_[i]; }
    std::span<const rank_t> bounds() const noexcept { return bounds_; }
    std::span<const key_t> layout() const noexcept { return layout_; }
    const DictParams& params() const noexcept { return params_; }

    /// Global outcome for a query routed to interval i.
    SearchOutcome search(std::size_t i, key_t x) const noexcept {
        const std::size_t lo = bounds_[i];
        const std::size_t len = bounds_[i + 1] - lo;
        if (len == 0) return {lo, false};
        SearchOutcome o = Layout::search(std::span<const key_t>(layout_.data() + lo, len), aux_of(i), x, params_);
        o.rank += lo;
        return o;
    }

    /// Bytes beyond the n-key layout arena: bounds and auxiliary arrays.
    std::size_t overhead_bytes() const noexcept {
        return bounds_.size() * sizeof(rank_t) + aux_.size() * sizeof(key_t) + aux_bounds_.size() * sizeof(std::size_t);
    }

private:
    static constexpr bool has_aux() noexcept { return std::is_same_v<Layout, layouts::Css>; }

    std::span<key_t> aux_of(std::size_t i) noexcept {
        if constexpr (!has_aux()) return {};
        else return std::span<key_t>(aux_).subspan(aux_bounds_[i], aux_bounds_[i + 1] - aux_bounds_[i]);
    }
    std::span<const key_t> aux_of(std::size_t i) const noexcept {
        if constexpr (!has_aux()) return {};
        else return std::span<const key_t>(aux_).subspan(aux_bounds_[i], aux_bounds_[i + 1] - aux_bounds_[i]);
    }

    std::vector<rank_t> bounds_;
    std::vector<key_t> layout_;
    std::vector<key_t> aux_;
    std::vector<std::size_t> aux_bounds_;
    DictParams params_;
};

/// One splay tree per interval. Searches splay, so they are non-const.
class SplayDictionarySet {
public:
    static constexpr bool self_adjusting = true;
    static constexpr std::string_view id = "splay";

    SplayDictionarySet() = default;
    SplayDictionarySet(std::span<const key_t> sorted, std::vector<rank_t> bounds, DictParams = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t intervals() const noexcept { return bounds_.size() - 1; }
    std::size_t interval_start(std::size_t i) const noexcept { return bounds_[i]; }
    std::size_t interval_size(std::size_t i) const noexcept { return bounds_[i + 1] - bounds_[i]; }
    std::span<const rank_t> bounds() const noexcept { return bounds_; }

    SearchOutcome search(std::size_t i, key_t x) {
        SearchOutcome o = pool_.search(roots_[i], x);
        o.rank += bounds_[i];
        return o;
    }

    std::size_t overhead_bytes() const noexcept {
        return bounds_.size() * sizeof(rank_t) + roots_.size() * sizeof(SplayPool::index_t) + pool_.bytes() -
               n_ * sizeof(key_t);
    }

    const SplayPool& pool() const noexcept { return pool_; }
    SplayPool::index_t root(std::size_t i) const noexcept { return roots_[i]; }

private:
    std::vector<rank_t> bounds_;
    std::vector<SplayPool::index_t> roots_;
    SplayPool pool_;
    std::size_t n_ = 0;
};

using BbsSet = ArrayDictionarySet<layouts::Bbs>;
using BfsSet = ArrayDictionarySet<layouts::Bfs>;
using BfeSet = ArrayDictionarySet<layouts::Eytzinger>;
using BftSet = ArrayDictionarySet<layouts::BTree>;
using IsSet = ArrayDictionarySet<layouts::Interpolation>;
using CssSet = ArrayDictionarySet<layouts::Css>;
using SplaySet = SplayDictionarySet;

template <class Set>
concept DictionarySet = requires(Set& s, std::size_t i, key_t x) {
    { s.search(i, x) } -> std::same_as<SearchOutcome>;
    { s.overhead_bytes() } -> std::convertible_to<std::size_t>;
    { Set::self_adjusting } -> std::convertible_to<bool>;
};

/// A dictionary over the whole key set.
template <DictionarySet Set>
class PlainDictionary {
public:
    static constexpr bool self_adjusting = Set::self_adjusting;

    explicit PlainDictionary(std::span<const key_t> sorted, DictParams params = {})
        : set_(sorted, single_interval(sorted.size()), params) {}

    SearchOutcome rank_search(key_t x) const
        requires(!Set::self_adjusting)
    {
        return set_.search(0, x);
    }
    SearchOutcome rank_search(key_t x)
        requires(Set::self_adjusting)
    {
        return set_.search(0, x);
    }

    std::size_t size() const noexcept { return set_.size(); }
    std::size_t space_bytes() const noexcept { return set_.overhead_bytes(); }
    const Set& set() const noexcept { return set_; }

private:
    Set set_;
};

// ---------------------------------------------------------------------------
// Run-time selection

enum class DictKind { bbs, bfs, bfe, bft, is, css, splay };

struct DictSpec {
    DictKind kind = DictKind::bbs;
    DictParams params;

    /// "bbs", "bft:16", ... Throws std::invalid_argument listing valid ids.
    static DictSpec parse(std::string_view text);
    std::string name() const;
    bool order_sensitive() const noexcept { return kind == DictKind::splay; }
};

std::vector<DictSpec> parse_dict_list(std::string_view csv);
inline constexpr std::string_view kValidDictIds = "bbs, bfs, bfe, bft[:B], is, css, splay";

/// Calls f(std::type_identity<Set>{}) with the set type for `kind`.
template <class F>
decltype(auto) visit_dict(DictKind kind, F&& f) {
    switch (kind) {
        case DictKind::bbs: return f(std::type_identity<BbsSet>{});
        case DictKind::bfs: return f(std::type_identity<BfsSet>{});
        case DictKind::bfe: return f(std::type_identity<BfeSet>{});
        case DictKind::bft: return f(std::type_identity<BftSet>{});
        case DictKind::is: return f(std::type_identity<IsSet>{});
        case DictKind::css: return f(std::type_identity<CssSet>{});
        case DictKind::splay: return f(std::type_identity<SplaySet>{});
    }
    throw std::logic_error("unknown dictionary kind");
}

inline constexpr std::array kAllDictKinds = {DictKind::bbs, DictKind::bfs, DictKind::bfe, DictKind::bft,
                                            DictKind::is,  DictKind::css, DictKind::splay};

}  // namespace gld
