#pragma once

// Bottom-up splay trees over a shared node pool. Nodes carry subtree sizes so
// searches report ranks. Several trees (one per bin) can live in one pool;
// each is identified by its root index.
//
// Every query splays, so a tree needs exclusive access even for searches.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gld/core.hpp"

namespace gld {

class SplayPool {
public:
    using index_t = std::uint32_t;
    static constexpr index_t nil = std::numeric_limits<index_t>::max();

    struct Node {
        key_t key;
        index_t left;
        index_t right;
        index_t parent;
        index_t size;
    };

    /// Balanced tree over `sorted`; returns its root.
    index_t build(std::span<const key_t> sorted);

    /// Lower-bound search within the tree; splays the last node touched.
    SearchOutcome search(index_t& root, key_t x);
    bool insert(index_t& root, key_t x);
    bool erase(index_t& root, key_t x);

    /// Largest key < x / smallest key > x. These splay as well.
    std::optional<key_t> predecessor(index_t& root, key_t x);
    std::optional<key_t> successor(index_t& root, key_t x);

    std::optional<key_t> min_key(index_t root) const;
    std::optional<key_t> max_key(index_t root) const;
    std::size_t size(index_t root) const noexcept { return root == nil ? 0 : nodes_[root].size; }
    key_t key(index_t node) const noexcept { return nodes_[node].key; }

    template <class F>
    void for_each(index_t root, F&& f) const {
        // in-order walk along parent links; roots have no parent
        if (root == nil) return;
        index_t cur = root;
        while (nodes_[cur].left != nil) cur = nodes_[cur].left;
        while (cur != nil) {
            f(nodes_[cur].key);
            if (nodes_[cur].right != nil) {
                cur = nodes_[cur].right;
                while (nodes_[cur].left != nil) cur = nodes_[cur].left;
            } else {
                index_t child = cur;
                cur = nodes_[cur].parent;
                while (cur != nil && nodes_[cur].right == child) {
                    child = cur;
                    cur = nodes_[cur].parent;
                }
            }
        }
    }

    /// Ordering, parent-link and size invariants of one tree.
    bool check(index_t root) const;

    void clear() noexcept {
        nodes_.clear();
        free_.clear();
    }
    void reserve(std::size_t n) { nodes_.reserve(n); }
    std::size_t live_nodes() const noexcept { return nodes_.size() - free_.size(); }
    std::size_t bytes() const noexcept {
        return nodes_.capacity() * sizeof(Node) + free_.capacity() * sizeof(index_t);
    }

private:
    index_t allocate(key_t x);
    index_t build_range(std::span<const key_t> sorted, std::size_t lo, std::size_t hi, index_t parent);
    void pull(index_t x) noexcept;
    void rotate(index_t x) noexcept;
    void splay(index_t x, index_t& root) noexcept;
    bool check_node(index_t x, index_t parent, const key_t* lo, const key_t* hi, std::size_t& count) const;

    std::vector<Node> nodes_;
    std::vector<index_t> free_;
};

/// One self-adjusting splay tree; a dynamic dictionary in its own right.
class SplayTree {
public:
    SplayTree() = default;
    explicit SplayTree(std::span<const key_t> sorted) { root_ = pool_.build(sorted); }

    SearchOutcome rank_search(key_t x) { return pool_.search(root_, x); }
    bool insert(key_t x) { return pool_.insert(root_, x); }
    bool erase(key_t x) { return pool_.erase(root_, x); }

    std::size_t size() const noexcept { return pool_.size(root_); }
    std::optional<key_t> root_key() const {
        if (root_ == SplayPool::nil) return std::nullopt;
        return pool_.key(root_);
    }
    bool check() const { return pool_.check(root_); }
    std::vector<key_t> keys() const {
        std::vector<key_t> out;
        out.reserve(size());
        pool_.for_each(root_, [&](key_t k) { out.push_back(k); });
        return out;
    }
    /// Bytes beyond the 8 bytes per key of a plain sorted array.
    std::size_t space_bytes() const noexcept { return pool_.bytes() - size() * sizeof(key_t); }

private:
    SplayPool pool_;
    SplayPool::index_t root_ = SplayPool::nil;
};

}  // namespace gld
