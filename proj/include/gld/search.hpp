#pragma once

// Sorted-array search routines and the implicit array layouts they run on.
// Every routine reports lower-bound rank semantics (see SearchOutcome).

#include <bit>
#include <cstddef>
#include <span>
#include <vector>

#include "gld/core.hpp"
#include "gld/prefetch.hpp"

namespace gld {

inline constexpr std::size_t kCacheLineKeys = 64 / sizeof(key_t);

namespace detail {

/// Branch-free uniform binary search over base[0, n). Returns the number of
/// elements < x. `steps` counts loop iterations.
inline std::size_t uniform_lower_bound(const key_t* base, std::size_t n, key_t x, std::size_t& steps) noexcept {
    if (n == 0) return 0;
    const key_t* first = base;
    while (n > 1) {
        const std::size_t half = n / 2;
        prefetch(base + half / 2);
        prefetch(base + half + half / 2);
        base = (base[half] < x) ? base + half : base;
        n -= half;
        ++steps;
    }
    return static_cast<std::size_t>(base - first) + (*base < x);
}

inline std::size_t uniform_lower_bound(const key_t* base, std::size_t n, key_t x) noexcept {
    std::size_t steps = 0;
    return uniform_lower_bound(base, n, x, steps);
}

inline SearchOutcome outcome_at(const key_t* a, std::size_t n, std::size_t rank, key_t x) noexcept {
    return {rank, rank < n && a[rank] == x};
}

}  // namespace detail

/// Classic branchy binary search.
inline SearchOutcome search_bbs(std::span<const key_t> keys, key_t x) noexcept {
    const key_t* a = keys.data();
    std::size_t left = 0, right = keys.size();
    while (left < right) {
        const std::size_t m = (left + right) / 2;
        if (x < a[m]) {
            right = m;
        } else if (x > a[m]) {
            left = m + 1;
        } else {
            return {m, true};
        }
    }
    return {right, false};
}

/// Uniform (branch-free) binary search with prefetching.
inline SearchOutcome search_bfs(std::span<const key_t> keys, key_t x) noexcept {
    const std::size_t r = detail::uniform_lower_bound(keys.data(), keys.size(), x);
    return detail::outcome_at(keys.data(), keys.size(), r, x);
}

/// Interpolation search. `probes`, when non-null, receives the probe count.
SearchOutcome search_is(std::span<const key_t> keys, key_t x, std::size_t* probes = nullptr) noexcept;

// ---------------------------------------------------------------------------
// Eytzinger layout

/// Keys permuted into breadth-first order of the complete binary search tree
/// (children of i at 2i+1 and 2i+2).
struct EytzingerLayout {
    std::vector<key_t> permuted;
    std::size_t size() const noexcept { return permuted.size(); }
};

void eytzinger_arrange(std::span<const key_t> sorted, std::span<key_t> out);
EytzingerLayout build_eytzinger(std::span<const key_t> sorted);

/// In-order rank of the node stored at layout position `index`.
inline std::size_t eytzinger_rank(std::size_t index, std::size_t n) noexcept {
    const std::size_t j = index + 1;
    const unsigned depth = std::bit_width(j) - 1;
    const unsigned height = std::bit_width(n) - 1;
    const std::size_t p = ((2 * (j - (std::size_t{1} << depth)) + 1) << (height - depth)) - 1;
    const std::size_t last_level = n - ((std::size_t{1} << height) - 1);
    const std::size_t leaves_before = (p + 1) / 2;
    return leaves_before > last_level ? p - (leaves_before - last_level) : p;
}

inline SearchOutcome eytzinger_search(std::span<const key_t> layout, key_t x) noexcept {
    constexpr std::size_t multiplier = kCacheLineKeys;
    constexpr std::size_t offset = multiplier - 1;
    const key_t* a = layout.data();
    const std::size_t n = layout.size();
    std::size_t i = 0;
    while (i < n) {
        prefetch(a + multiplier * i + offset);
        i = (x <= a[i]) ? 2 * i + 1 : 2 * i + 2;
    }
    // Drop the trailing right turns and the final left turn.
    const std::size_t j = (i + 1) >> (std::countr_one(i + 1) + 1);
    if (j == 0) return {n, false};
    return {eytzinger_rank(j - 1, n), a[j - 1] == x};
}

inline SearchOutcome search_bfe(const EytzingerLayout& layout, key_t x) noexcept {
    return eytzinger_search(layout.permuted, x);
}

// ---------------------------------------------------------------------------
// B-tree layout: implicit (B+1)-ary tree, node b holds slots [bB, bB+B).

struct BTreeLayout {
    std::vector<key_t> permuted;
    std::size_t block = kCacheLineKeys;
    std::size_t size() const noexcept { return permuted.size(); }
};

void btree_arrange(std::span<const key_t> sorted, std::span<key_t> out, std::size_t block);
BTreeLayout build_btree_layout(std::span<const key_t> sorted, std::size_t block = kCacheLineKeys);

/// In-order rank of layout slot `slot`.
std::size_t btree_rank(std::size_t slot, std::size_t n, std::size_t block) noexcept;

inline SearchOutcome btree_search(std::span<const key_t> layout, std::size_t block, key_t x) noexcept {
    const key_t* a = layout.data();
    const std::size_t n = layout.size();
    const std::size_t B = block;
    auto child = [B](std::size_t c, std::size_t i) { return (B + 1) * i + (c + 1) * B; };
    std::size_t j = n;
    std::size_t i = 0;
    while (i + B <= n) {
        prefetch(a + child(B / 2, i));
        const key_t* base = a + i;
        const std::size_t nth = detail::uniform_lower_bound(base, B, x);
        const key_t current = base[nth % B];
        j = (current >= x) ? i + nth : j;
        i = child(nth, i);
    }
    if (i < n) {
        const std::size_t ret = i + detail::uniform_lower_bound(a + i, n - i, x);
        if (ret != n) j = ret;
    }
    if (j == n) return {n, false};
    return {btree_rank(j, n, B), a[j] == x};
}

inline SearchOutcome search_bft(const BTreeLayout& layout, key_t x) noexcept {
    return btree_search(layout.permuted, layout.block, x);
}

// ---------------------------------------------------------------------------
// CSS tree: the sorted array is the leaf level, cut into blocks of kCssNodeKeys
// keys. Internal nodes hold kCssNodeKeys separators (the maximum key of each
// child subtree but the last) and have kCssNodeKeys + 1 children; they are
// stored level by level from the root in one array.

inline constexpr std::size_t kCssNodeKeys = 16;
inline constexpr std::size_t kCssFanout = kCssNodeKeys + 1;

/// Level structure of a CSS tree over n keys.
struct CssShape {
    static constexpr std::size_t kMaxLevels = 24;
    std::size_t levels = 0;                         // internal levels
    std::size_t level_offset[kMaxLevels] = {};      // first node of level, root level first
    std::size_t internal_nodes = 0;

    explicit CssShape(std::size_t n) noexcept;
    std::size_t separator_count() const noexcept { return internal_nodes * kCssNodeKeys; }
};

struct CssTree {
    std::vector<key_t> leaves;      // the sorted keys
    std::vector<key_t> separators;  // internal levels, root first
    std::size_t size() const noexcept { return leaves.size(); }
};

void css_arrange_separators(std::span<const key_t> sorted, std::span<key_t> separators);
CssTree build_css(std::span<const key_t> sorted);

inline SearchOutcome css_search(std::span<const key_t> leaves, std::span<const key_t> separators, key_t x) noexcept {
    const std::size_t n = leaves.size();
    const CssShape shape(n);
    std::size_t node = 0;
    for (std::size_t level = 0; level < shape.levels; ++level) {
        const key_t* seps = separators.data() + (shape.level_offset[level] + node) * kCssNodeKeys;
        node = node * kCssFanout + detail::uniform_lower_bound(seps, kCssNodeKeys, x);
    }
    const std::size_t first = node * kCssNodeKeys;
    const std::size_t len = first < n ? std::min(kCssNodeKeys, n - first) : 0;
    const std::size_t r = first + detail::uniform_lower_bound(leaves.data() + first, len, x);
    return detail::outcome_at(leaves.data(), n, r, x);
}

inline SearchOutcome search_css(const CssTree& tree, key_t x) noexcept {
    return css_search(tree.leaves, tree.separators, x);
}

}  // namespace gld
