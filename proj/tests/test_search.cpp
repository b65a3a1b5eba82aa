#include "doctest.h"

#include <bit>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gld/search.hpp"
#include "gld/splay_tree.hpp"
#include "oracles.hpp"

using namespace gld;

namespace {

const std::vector<gld::key_t> kFixture = {47, 105, 140, 289, 316, 358, 386, 398, 819, 939};

std::vector<gld::key_t> iota_keys(gld::key_t first, std::size_t n) {
    std::vector<gld::key_t> v(n);
    std::iota(v.begin(), v.end(), first);
    return v;
}

std::vector<gld::key_t> random_keys(std::size_t n, std::uint64_t seed, gld::key_t max = gld::key_t{1} << 40) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<gld::key_t> d(0, max);
    std::vector<gld::key_t> v;
    while (v.size() < n) {
        v.push_back(d(rng));
        if (v.size() == n) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    return v;
}

// Queries around every key plus random draws.
std::vector<gld::key_t> probe_set(const std::vector<gld::key_t>& keys, std::uint64_t seed, std::size_t extra) {
    std::vector<gld::key_t> qs = {0, ~gld::key_t{0}};
    for (gld::key_t k : keys) {
        qs.push_back(k);
        qs.push_back(k + 1);
        if (k > 0) qs.push_back(k - 1);
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < extra; ++i) qs.push_back(rng() >> 23);
    return qs;
}

template <class Search>
void check_all(const std::vector<gld::key_t>& keys, const std::vector<gld::key_t>& qs, Search&& search) {
    for (gld::key_t x : qs) {
        const SearchOutcome want = oracle::lower(keys, x);
        const SearchOutcome got = search(x);
        if (!(got == want)) {
            INFO("x = " << x << " n = " << keys.size());
            CHECK(got.rank == want.rank);
            CHECK(got.found == want.found);
            return;
        }
    }
}

}  // namespace

TEST_CASE("branchy binary search") {
    CHECK(search_bbs(kFixture, 386) == SearchOutcome{6, true});
    CHECK(search_bbs(kFixture, 400) == SearchOutcome{8, false});
    const std::vector<gld::key_t> one = {5};
    CHECK(search_bbs(one, 5) == SearchOutcome{0, true});
    CHECK(search_bbs(std::span<const gld::key_t>{}, 5) == SearchOutcome{0, false});
}

TEST_CASE("branch-free binary search") {
    CHECK(search_bfs(kFixture, 386) == SearchOutcome{6, true});
    CHECK(search_bfs(kFixture, 46) == SearchOutcome{0, false});
    CHECK(search_bfs(kFixture, 939) == SearchOutcome{9, true});
    CHECK(search_bfs(kFixture, 940) == SearchOutcome{10, false});
    for (std::size_t n : {1u, 2u, 3u, 7u, 8u, 9u, 1000u, 1025u}) {
        const auto keys = iota_keys(10, n);
        std::size_t steps = 0;
        detail::uniform_lower_bound(keys.data(), n, keys[n / 2], steps);
        // the loop length depends only on n
        CHECK(steps == static_cast<std::size_t>(std::bit_width(n - 1)));
    }
}

TEST_CASE("eytzinger layout") {
    const auto seven = iota_keys(1, 7);
    CHECK(build_eytzinger(seven).permuted == std::vector<gld::key_t>{4, 2, 6, 1, 3, 5, 7});
    const auto fifteen = iota_keys(1, 15);
    CHECK(build_eytzinger(fifteen).permuted ==
          std::vector<gld::key_t>{8, 4, 12, 2, 6, 10, 14, 1, 3, 5, 7, 9, 11, 13, 15});
    CHECK(search_bfe(build_eytzinger(seven), 5) == SearchOutcome{4, true});
    for (std::size_t n = 1; n <= 70; ++n) {
        const auto keys = iota_keys(1, n);
        const auto layout = build_eytzinger(keys);
        CHECK(layout.permuted == oracle::eytzinger(keys));
        for (std::size_t i = 0; i < n; ++i) CHECK(layout.permuted[i] == keys[eytzinger_rank(i, n)]);
    }
}

TEST_CASE("eytzinger search matches the oracle") {
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 16u, 17u, 100u, 1000u, 10000u}) {
        const auto keys = random_keys(n, n + 1);
        const auto layout = build_eytzinger(keys);
        check_all(keys, probe_set(keys, n, 1000), [&](gld::key_t x) { return search_bfe(layout, x); });
    }
}

TEST_CASE("b-tree layout golden") {
    std::ifstream in(std::string(GLD_TEST_DATA_DIR) + "/btree_1_15_b2.txt");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);  // header
    std::vector<gld::key_t> golden;
    for (gld::key_t v; in >> v;) golden.push_back(v);
    const auto keys = iota_keys(1, 15);
    CHECK(oracle::btree(keys, 2) == golden);
    CHECK(build_btree_layout(keys, 2).permuted == golden);
}

TEST_CASE("b-tree layout and ranks against the construction oracle") {
    for (std::size_t B : {1u, 2u, 3u, 8u, 16u})
        for (std::size_t n = 1; n <= 90; ++n) {
            const auto keys = iota_keys(1, n);
            const auto layout = build_btree_layout(keys, B);
            REQUIRE(layout.permuted == oracle::btree(keys, B));
            for (std::size_t s = 0; s < n; ++s) CHECK(keys[btree_rank(s, n, B)] == layout.permuted[s]);
        }
}

TEST_CASE("b-tree search matches the oracle") {
    const auto layout = build_btree_layout(iota_keys(100, 50), 4);
    CHECK(search_bft(layout, 3) == SearchOutcome{0, false});
    for (std::size_t B : {1u, 2u, 8u, 16u})
        for (std::size_t n : {0u, 1u, 2u, 9u, 100u, 10000u}) {
            const auto keys = random_keys(n, 7 * n + B);
            const auto lay = build_btree_layout(keys, B);
            check_all(keys, probe_set(keys, B, 1000), [&](gld::key_t x) { return search_bft(lay, x); });
        }
}

TEST_CASE("interpolation search") {
    std::vector<gld::key_t> tens;
    for (gld::key_t v = 0; v <= 90; v += 10) tens.push_back(v);
    std::size_t probes = 0;
    CHECK(search_is(tens, 70, &probes) == SearchOutcome{7, true});
    CHECK(probes == 1);
    CHECK(search_is(kFixture, 47) == SearchOutcome{0, true});
    CHECK(search_is(kFixture, 500) == SearchOutcome{8, false});
    for (std::size_t n : {0u, 1u, 2u, 3u, 100u, 10000u}) {
        const auto keys = random_keys(n, 3 * n + 1);
        check_all(keys, probe_set(keys, n, 1000), [&](gld::key_t x) { return search_is(keys, x); });
    }
    // extreme spread: one key far above the rest
    std::vector<gld::key_t> skew = iota_keys(0, 100);
    skew.push_back(~gld::key_t{0});
    check_all(skew, probe_set(skew, 5, 100), [&](gld::key_t x) { return search_is(skew, x); });
}

TEST_CASE("css tree") {
    const std::vector<gld::key_t> one = {42};
    CHECK(search_css(build_css(one), 42) == SearchOutcome{0, true});
    std::vector<gld::key_t> evens;
    for (gld::key_t v = 0; v < 4000; v += 2) evens.push_back(v);
    const CssTree evens_tree = build_css(evens);
    for (gld::key_t v = 1; v < 4000; v += 2) CHECK_FALSE(search_css(evens_tree, v).found);
    for (std::size_t n : {2u, 16u, 17u, 272u, 273u, 5000u, 10000u}) {
        const auto keys = random_keys(n, 11 * n);
        const CssTree tree = build_css(keys);
        check_all(keys, probe_set(keys, n, 1000), [&](gld::key_t x) { return search_css(tree, x); });
    }
}

TEST_CASE("splay tree basics") {
    SplayTree t;
    CHECK_FALSE(t.rank_search(5).found);
    CHECK(t.insert(5));
    CHECK_FALSE(t.insert(5));
    CHECK(t.rank_search(5) == SearchOutcome{0, true});
    CHECK(t.root_key() == 5u);

    SplayTree u;
    for (gld::key_t v = 1; v <= 7; ++v) u.insert(v);
    CHECK(u.rank_search(1) == SearchOutcome{0, true});
    CHECK(u.root_key() == 1u);
    CHECK(u.check());
    CHECK(u.erase(4));
    CHECK_FALSE(u.erase(4));
    CHECK(u.keys() == std::vector<gld::key_t>{1, 2, 3, 5, 6, 7});
    CHECK(u.rank_search(4) == SearchOutcome{3, false});
}

TEST_CASE("splay tree random operations match a sorted list") {
    std::mt19937_64 rng(99);
    SplayTree t(iota_keys(0, 0));
    std::vector<gld::key_t> mirror;
    for (int op = 0; op < 10000; ++op) {
        const gld::key_t x = rng() % 2000;
        const auto it = std::lower_bound(mirror.begin(), mirror.end(), x);
        const bool present = it != mirror.end() && *it == x;
        switch (rng() % 3) {
            case 0:
                CHECK(t.insert(x) == !present);
                if (!present) mirror.insert(it, x);
                break;
            case 1:
                CHECK(t.erase(x) == present);
                if (present) mirror.erase(it);
                break;
            default: {
                const SearchOutcome got = t.rank_search(x);
                CHECK(got == oracle::lower(mirror, x));
            }
        }
    }
    CHECK(t.check());
    CHECK(t.keys() == mirror);
}

TEST_CASE("splay pool keeps separate trees apart") {
    SplayPool pool;
    const auto a_keys = iota_keys(0, 50), b_keys = iota_keys(1000, 30);
    auto a = pool.build(a_keys);
    auto b = pool.build(b_keys);
    CHECK(pool.size(a) == 50);
    CHECK(pool.size(b) == 30);
    CHECK(pool.search(a, 1000) == SearchOutcome{50, false});
    CHECK(pool.search(b, 1010) == SearchOutcome{10, true});
    CHECK(pool.predecessor(b, 1000) == std::nullopt);
    CHECK(pool.successor(a, 49) == std::nullopt);
    CHECK(pool.predecessor(a, 25) == 24u);
    CHECK(pool.min_key(b) == 1000u);
    CHECK(pool.max_key(a) == 49u);
    CHECK(pool.check(a));
    CHECK(pool.check(b));
}
