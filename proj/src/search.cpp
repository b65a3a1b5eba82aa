#include "gld/search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gld {

SearchOutcome search_is(std::span<const key_t> keys, key_t x, std::size_t* probes) noexcept {
    const key_t* a = keys.data();
    const std::size_t n = keys.size();
    std::size_t count = 0;
    auto done = [&](SearchOutcome o) {
        if (probes) *probes = count;
        return o;
    };
    if (n == 0) return done({0, false});
    // Invariant: a[0, lo) < x and a(hi, n) > x.
    std::size_t lo = 0, hi = n - 1;
    while (true) {
        if (x < a[lo]) return done({lo, false});
        if (x > a[hi]) return done({hi + 1, false});
        if (lo == hi) return done({lo, a[lo] == x});
        const double scale = static_cast<double>(hi - lo) / static_cast<double>(a[hi] - a[lo]);
        std::size_t pos = lo + static_cast<std::size_t>(scale * static_cast<double>(x - a[lo]));
        pos = std::clamp(pos, lo, hi);
        ++count;
        if (a[pos] == x) return done({pos, true});
        if (a[pos] < x) {
            lo = pos + 1;
        } else {
            if (pos == lo) return done({lo, false});
            hi = pos - 1;
        }
        if (lo > hi) return done({lo, false});
    }
}

// ---------------------------------------------------------------------------

namespace {

void eytzinger_fill(std::span<const key_t> sorted, std::span<key_t> out, std::size_t& next, std::size_t i) {
    if (i >= out.size()) return;
    eytzinger_fill(sorted, out, next, 2 * i + 1);
    out[i] = sorted[next++];
    eytzinger_fill(sorted, out, next, 2 * i + 2);
}

void btree_fill(std::span<const key_t> sorted, std::span<key_t> out, std::size_t B, std::size_t& next,
                std::size_t node) {
    const std::size_t n = out.size();
    if (node * B >= n) return;
    for (std::size_t c = 0; c <= B; ++c) {
        btree_fill(sorted, out, B, next, node * (B + 1) + c + 1);
        if (c < B && node * B + c < n) out[node * B + c] = sorted[next++];
    }
}

// Existing slots across the contiguous node-id range [u, v) and all of its
// descendants.
std::size_t btree_subtree_keys(std::size_t u, std::size_t v, std::size_t n, std::size_t B) noexcept {
    std::size_t total = 0;
    while (u < v && u * B < n) {
        total += std::min(v * B, n) - u * B;
        u = u * (B + 1) + 1;
        v = v * (B + 1) + 1;
    }
    return total;
}

}  // namespace

void eytzinger_arrange(std::span<const key_t> sorted, std::span<key_t> out) {
    if (sorted.size() != out.size()) throw std::invalid_argument("layout size mismatch");
    std::size_t next = 0;
    eytzinger_fill(sorted, out, next, 0);
}

EytzingerLayout build_eytzinger(std::span<const key_t> sorted) {
    EytzingerLayout layout;
    layout.permuted.resize(sorted.size());
    eytzinger_arrange(sorted, layout.permuted);
    return layout;
}

void btree_arrange(std::span<const key_t> sorted, std::span<key_t> out, std::size_t block) {
    if (block == 0) throw std::invalid_argument("B-tree block size must be at least 1");
    if (sorted.size() != out.size()) throw std::invalid_argument("layout size mismatch");
    std::size_t next = 0;
    btree_fill(sorted, out, block, next, 0);
}

BTreeLayout build_btree_layout(std::span<const key_t> sorted, std::size_t block) {
    BTreeLayout layout;
    layout.block = block;
    layout.permuted.resize(sorted.size());
    btree_arrange(sorted, layout.permuted, block);
    return layout;
}

std::size_t btree_rank(std::size_t slot, std::size_t n, std::size_t B) noexcept {
    std::size_t node = slot / B;
    const std::size_t c = slot % B;
    // children 0..c of the node, plus the c keys before the slot
    std::size_t rank = btree_subtree_keys(node * (B + 1) + 1, node * (B + 1) + c + 2, n, B) + c;
    while (node > 0) {
        const std::size_t parent = (node - 1) / (B + 1);
        const std::size_t ci = (node - 1) % (B + 1);
        rank += btree_subtree_keys(parent * (B + 1) + 1, parent * (B + 1) + 1 + ci, n, B) + ci;
        node = parent;
    }
    return rank;
}

// ---------------------------------------------------------------------------

CssShape::CssShape(std::size_t n) noexcept {
    std::size_t sizes[kMaxLevels];
    std::size_t count = (n + kCssNodeKeys - 1) / kCssNodeKeys;
    while (count > 1 && levels < kMaxLevels) {
        count = (count + kCssFanout - 1) / kCssFanout;
        sizes[levels++] = count;
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l < levels; ++l) {
        level_offset[l] = offset;
        offset += sizes[levels - 1 - l];
    }
    internal_nodes = offset;
}

void css_arrange_separators(std::span<const key_t> sorted, std::span<key_t> separators) {
    const std::size_t n = sorted.size();
    const CssShape shape(n);
    if (separators.size() != shape.separator_count()) throw std::invalid_argument("separator array size mismatch");
    if (shape.levels == 0) return;

    // Maxima of the subtrees one level below the one being filled.
    std::vector<key_t> below;
    const std::size_t blocks = (n + kCssNodeKeys - 1) / kCssNodeKeys;
    below.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) below.push_back(sorted[std::min(n, (b + 1) * kCssNodeKeys) - 1]);

    for (std::size_t level = shape.levels; level-- > 0;) {
        const std::size_t nodes = (below.size() + kCssFanout - 1) / kCssFanout;
        std::vector<key_t> maxima(nodes);
        for (std::size_t j = 0; j < nodes; ++j) {
            key_t* seps = separators.data() + (shape.level_offset[level] + j) * kCssNodeKeys;
            for (std::size_t c = 0; c < kCssNodeKeys; ++c) {
                const std::size_t child = j * kCssFanout + c;
                seps[c] = child + 1 < below.size() ? below[child] : std::numeric_limits<key_t>::max();
            }
            maxima[j] = below[std::min(below.size(), (j + 1) * kCssFanout) - 1];
        }
        below = std::move(maxima);
    }
}

CssTree build_css(std::span<const key_t> sorted) {
    CssTree tree;
    tree.leaves.assign(sorted.begin(), sorted.end());
    tree.separators.resize(CssShape(sorted.size()).separator_count());
    css_arrange_separators(tree.leaves, tree.separators);
    return tree;
}

}  // namespace gld
