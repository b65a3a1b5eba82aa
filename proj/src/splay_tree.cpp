#include "gld/splay_tree.hpp"

#include <stdexcept>

namespace gld {

SplayPool::index_t SplayPool::allocate(key_t x) {
    index_t i;
    if (!free_.empty()) {
        i = free_.back();
        free_.pop_back();
    } else {
        if (nodes_.size() >= nil) throw std::length_error("splay pool exhausted");
        i = static_cast<index_t>(nodes_.size());
        nodes_.emplace_back();
    }
    nodes_[i] = Node{x, nil, nil, nil, 1};
    return i;
}

SplayPool::index_t SplayPool::build(std::span<const key_t> sorted) {
    require_rank_capacity(sorted.size());
    return build_range(sorted, 0, sorted.size(), nil);
}

SplayPool::index_t SplayPool::build_range(std::span<const key_t> sorted, std::size_t lo, std::size_t hi,
                                          index_t parent) {
    if (lo >= hi) return nil;
    const std::size_t mid = lo + (hi - lo) / 2;
    const index_t x = allocate(sorted[mid]);
    nodes_[x].parent = parent;
    const index_t l = build_range(sorted, lo, mid, x);
    const index_t r = build_range(sorted, mid + 1, hi, x);
    nodes_[x].left = l;
    nodes_[x].right = r;
    nodes_[x].size = static_cast<index_t>(hi - lo);
    return x;
}

void SplayPool::pull(index_t x) noexcept {
    Node& n = nodes_[x];
    n.size = 1 + size(n.left) + size(n.right);
}

void SplayPool::rotate(index_t x) noexcept {
    const index_t p = nodes_[x].parent;
    const index_t g = nodes_[p].parent;
    if (nodes_[p].left == x) {
        const index_t b = nodes_[x].right;
        nodes_[p].left = b;
        if (b != nil) nodes_[b].parent = p;
        nodes_[x].right = p;
    } else {
        const index_t b = nodes_[x].left;
        nodes_[p].right = b;
        if (b != nil) nodes_[b].parent = p;
        nodes_[x].left = p;
    }
    nodes_[p].parent = x;
    nodes_[x].parent = g;
    if (g != nil) {
        if (nodes_[g].left == p)
            nodes_[g].left = x;
        else
            nodes_[g].right = x;
    }
    pull(p);
    pull(x);
}

void SplayPool::splay(index_t x, index_t& root) noexcept {
    while (nodes_[x].parent != nil) {
        const index_t p = nodes_[x].parent;
        const index_t g = nodes_[p].parent;
        if (g != nil) {
            const bool zigzig = (nodes_[p].left == x) == (nodes_[g].left == p);
            rotate(zigzig ? p : x);
        }
        rotate(x);
    }
    root = x;
}

SearchOutcome SplayPool::search(index_t& root, key_t x) {
    index_t cur = root, last = nil;
    std::size_t below = 0;
    SearchOutcome out{0, false};
    while (cur != nil) {
        last = cur;
        const Node& n = nodes_[cur];
        if (x < n.key) {
            cur = n.left;
        } else if (x > n.key) {
            below += size(n.left) + 1;
            cur = n.right;
        } else {
            below += size(n.left);
            out.found = true;
            break;
        }
    }
    out.rank = below;
    if (last != nil) splay(last, root);
    return out;
}

bool SplayPool::insert(index_t& root, key_t x) {
    if (root == nil) {
        root = allocate(x);
        return true;
    }
    index_t cur = root, last = nil;
    while (cur != nil) {
        last = cur;
        if (x < nodes_[cur].key) {
            cur = nodes_[cur].left;
        } else if (x > nodes_[cur].key) {
            cur = nodes_[cur].right;
        } else {
            splay(cur, root);
            return false;
        }
    }
    const index_t fresh = allocate(x);
    nodes_[fresh].parent = last;
    if (x < nodes_[last].key)
        nodes_[last].left = fresh;
    else
        nodes_[last].right = fresh;
    for (index_t a = last; a != nil; a = nodes_[a].parent) ++nodes_[a].size;
    splay(fresh, root);
    return true;
}

bool SplayPool::erase(index_t& root, key_t x) {
    index_t cur = root, last = nil;
    while (cur != nil && nodes_[cur].key != x) {
        last = cur;
        cur = x < nodes_[cur].key ? nodes_[cur].left : nodes_[cur].right;
    }
    if (cur == nil) {
        if (last != nil) splay(last, root);
        return false;
    }
    splay(cur, root);
    const index_t l = nodes_[cur].left;
    const index_t r = nodes_[cur].right;
    free_.push_back(cur);
    if (l == nil) {
        root = r;
        if (r != nil) nodes_[r].parent = nil;
        return true;
    }
    nodes_[l].parent = nil;
    index_t m = l;
    while (nodes_[m].right != nil) m = nodes_[m].right;
    index_t left_root = l;
    splay(m, left_root);
    nodes_[m].right = r;
    if (r != nil) nodes_[r].parent = m;
    pull(m);
    root = m;
    return true;
}

std::optional<key_t> SplayPool::predecessor(index_t& root, key_t x) {
    index_t cur = root, last = nil, best = nil;
    while (cur != nil) {
        last = cur;
        if (nodes_[cur].key < x) {
            best = cur;
            cur = nodes_[cur].right;
        } else {
            cur = nodes_[cur].left;
        }
    }
    if (last == nil) return std::nullopt;
    splay(best != nil ? best : last, root);
    if (best == nil) return std::nullopt;
    return nodes_[best].key;
}

std::optional<key_t> SplayPool::successor(index_t& root, key_t x) {
    index_t cur = root, last = nil, best = nil;
    while (cur != nil) {
        last = cur;
        if (nodes_[cur].key > x) {
            best = cur;
            cur = nodes_[cur].left;
        } else {
            cur = nodes_[cur].right;
        }
    }
    if (last == nil) return std::nullopt;
    splay(best != nil ? best : last, root);
    if (best == nil) return std::nullopt;
    return nodes_[best].key;
}

std::optional<key_t> SplayPool::min_key(index_t root) const {
    if (root == nil) return std::nullopt;
    while (nodes_[root].left != nil) root = nodes_[root].left;
    return nodes_[root].key;
}

std::optional<key_t> SplayPool::max_key(index_t root) const {
    if (root == nil) return std::nullopt;
    while (nodes_[root].right != nil) root = nodes_[root].right;
    return nodes_[root].key;
}

bool SplayPool::check_node(index_t x, index_t parent, const key_t* lo, const key_t* hi, std::size_t& count) const {
    if (x == nil) return true;
    const Node& n = nodes_[x];
    if (n.parent != parent) return false;
    if (lo && n.key <= *lo) return false;
    if (hi && n.key >= *hi) return false;
    std::size_t before = count;
    if (!check_node(n.left, x, lo, &n.key, count)) return false;
    ++count;
    if (!check_node(n.right, x, &n.key, hi, count)) return false;
    return count - before == n.size;
}

bool SplayPool::check(index_t root) const {
    std::size_t count = 0;
    return check_node(root, nil, nullptr, nullptr, count);
}

}  // namespace gld
