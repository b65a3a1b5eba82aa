#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gld/forest.hpp"
#include "gld/workloads.hpp"
#include "oracles.hpp"

using namespace gld;

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("optimal tree small cases") {
    const std::vector<double> p1 = {1.0}, q1 = {0.0, 0.0};
    CHECK(optimal_bst(p1, q1).cost == doctest::Approx(1.0));

    const std::vector<double> p3 = {0.25, 0.5, 0.25}, q3 = {0, 0, 0, 0};
    const BstPlan t = optimal_bst(p3, q3);
    CHECK(t.cost == doctest::Approx(1.5));
    CHECK(t.roots.at(0, 3) == 1);
    CHECK(t.key_depth == std::vector<std::uint32_t>{1, 0, 1});
    CHECK(t.leaf_depth == std::vector<std::uint32_t>{2, 2, 2, 2});

    const std::vector<double> p0, q0 = {1.0};
    CHECK(optimal_bst(p0, q0).cost == 0.0);
    CHECK_THROWS_AS(optimal_bst(p3, p3), std::invalid_argument);
    const std::vector<double> neg = {-0.1};
    CHECK_THROWS_AS(optimal_bst(neg, q1), std::invalid_argument);
}

TEST_CASE("shape enumeration counts Catalan numbers") {
    const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
    for (std::size_t m = 0; m < 8; ++m) CHECK(oracle::all_shapes(m).size() == catalan[m]);
}

TEST_CASE("optimal tree equals the exhaustive minimum") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 8;
        std::vector<double> p(m), q(m + 1);
        for (double& v : p) v = u(rng);
        for (double& v : q) v = trial % 3 == 0 ? 0.0 : u(rng);
        const BstPlan t = optimal_bst(p, q);
        CHECK(t.cost == doctest::Approx(oracle::min_bst_cost(p, q)).epsilon(1e-12));
        CHECK(cost_from_depths(p, q, t) == doctest::Approx(t.cost).epsilon(1e-12));
    }
}

TEST_CASE("weight-balanced tree") {
    const std::vector<double> p1 = {0.7}, q1 = {0.1, 0.2};
    CHECK(approx_bst(p1, q1).cost == doctest::Approx(optimal_bst(p1, q1).cost));

    // a complete tree over 2^3 - 1 equally likely keys
    const std::vector<double> p7(7, 1.0 / 7.0), q8(8, 0.0);
    const BstPlan t = approx_bst(p7, q8);
    CHECK(t.key_depth == std::vector<std::uint32_t>{2, 1, 2, 0, 2, 1, 2});
    CHECK(t.cost == doctest::Approx(17.0 / 7.0));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 120;
        const AccessDistribution d = synthetic_distribution(n, trial % 2 ? "random" : "zipf:1.2", trial);
        const double h = entropy(d);
        const BstPlan opt = optimal_bst(d.p(), d.q());
        const BstPlan apx = approx_bst(d.p(), d.q());
        CHECK(apx.cost >= opt.cost - 1e-12);
        CHECK(apx.cost <= h + 2.0);
        CHECK(opt.cost <= h + 2.0);
    }
}

TEST_CASE("optimal cost can exceed entropy plus one") {
    // two heavy leaves nearly at the ends force cost near 2 at entropy near 0
    const double eps = 1e-6;
    const std::vector<double> p = {0.0, 0.0}, q = {eps, 1.0 - 2 * eps, eps};
    const AccessDistribution d(p, q);
    const BstPlan t = optimal_bst(p, q);
    CHECK(t.cost > entropy(d) + 1.0);
    // one bin adds the routing step on top
    const std::vector<gld::key_t> keys = {10, 20};
    CHECK(build_forest(keys, d, 1, ForestMode::Exact).total_cost > entropy(d) + 2.0);
    CHECK(optimize_over_k(keys, d, 2, ForestMode::Exact).best.total_cost <= entropy(d) + 2.0);
}

TEST_CASE("bin weights with one bin keep the whole distribution") {
    const std::vector<gld::key_t> keys = {3, 8, 20};
    const AccessDistribution d({0.1, 0.2, 0.3}, {0.1, 0.1, 0.1, 0.1});
    const auto bins = bin_weights(keys, 1, d);
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].weight == doctest::Approx(1.0));
    CHECK(bins[0].q == std::vector<double>(d.q().begin(), d.q().end()));
    CHECK(bins[0].p == std::vector<double>(d.p().begin(), d.p().end()));
}

TEST_CASE("a gap halved by a bin border is shared equally") {
    const std::vector<gld::key_t> keys = {0, 4, 6, 10};
    const AccessDistribution d({0.1, 0.1, 0.1, 0.1}, {0.1, 0.1, 0.2, 0.1, 0.1});
    const auto bins = bin_weights(keys, 2, d);
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].p.size() == 2);
    CHECK(bins[0].q.back() == doctest::Approx(0.1));
    CHECK(bins[1].q.front() == doctest::Approx(0.1));
    CHECK(bins[0].weight + bins[1].weight == doctest::Approx(1.0));
}

TEST_CASE("three-bin fixture with an empty middle bin") {
    // width 10: bins [0,10], [10,20], [20,30]; the gap (9, 30) overlaps them by 1, 10, 10
    const std::vector<gld::key_t> keys = {0, 2, 9, 30};
    const AccessDistribution d({0.1, 0.1, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.21, 0.09});
    const auto bins = bin_weights(keys, 3, d);
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].p.size() == 3);
    CHECK(bins[0].q[3] == doctest::Approx(0.01));
    CHECK(bins[0].weight == doctest::Approx(0.61));
    CHECK(bins[1].p.empty());
    REQUIRE(bins[1].q.size() == 1);
    CHECK(bins[1].q[0] == doctest::Approx(0.10));
    CHECK(bins[2].q[0] == doctest::Approx(0.10));
    CHECK(bins[2].weight == doctest::Approx(0.29));
    double total = 0.0;
    for (const auto& b : bins) total += b.weight;
    CHECK(total == doctest::Approx(1.0));

    // per-bin costs by hand: 1.12 (balanced), 0 (single leaf), 0.29 (one key)
    const ForestPlan f = build_forest(keys, d, 3, ForestMode::Exact);
    CHECK(f.trees[0].cost == doctest::Approx(1.12));
    CHECK(f.trees[1].cost == doctest::Approx(0.0));
    CHECK(f.trees[2].cost == doctest::Approx(0.29));
    CHECK(f.total_cost == doctest::Approx(2.41));
    CHECK(forest_cost(f) == doctest::Approx(2.41));
}

TEST_CASE("forest cost special cases") {
    const auto keys = gen_uniform(40, 10000, 1);
    const AccessDistribution d = synthetic_distribution(40, "random", 4);
    const ForestPlan one = build_forest(keys.keys(), d, 1, ForestMode::Exact);
    CHECK(one.total_cost == doctest::Approx(1.0 + optimal_bst(d.p(), d.q()).cost));
    const ForestSweep s1 = optimize_over_k(keys.keys(), d, 1, ForestMode::Exact);
    CHECK(s1.cost_by_k.size() == 1);
    CHECK(s1.best.total_cost == doctest::Approx(one.total_cost));

    std::vector<double> p(40, 0.0), q(41, 0.0);
    p[17] = 1.0;
    const AccessDistribution point(p, q);
    const ForestSweep s = optimize_over_k(keys.keys(), point, 10, ForestMode::Exact);
    for (double c : s.cost_by_k) CHECK(c == doctest::Approx(2.0));
    CHECK(s.best.k == 1);
}

TEST_CASE("forest sweeps respect the entropy bound and the exact/approx order") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng() % 150;
        const auto keys = gen_uniform(n, std::uint64_t{1} << 30, rng());
        const AccessDistribution d = synthetic_distribution(n, "random", rng());
        const ForestSweep ex = optimize_over_k(keys.keys(), d, 16, ForestMode::Exact);
        const ForestSweep ap = optimize_over_k(keys.keys(), d, 16, ForestMode::Approx);
        CHECK(ex.best.total_cost <= entropy(d) + 2.0);
        for (std::size_t k = 0; k < 16; ++k) CHECK(ap.cost_by_k[k] >= ex.cost_by_k[k] - 1e-12);
        double w = 0.0;
        for (double x : ex.best.weights) w += x;
        CHECK(w == doctest::Approx(1.0));
    }
}

TEST_CASE("synthetic distributions") {
    const AccessDistribution u = synthetic_distribution(15, "uniform", 0);
    for (double v : u.p()) CHECK(v == doctest::Approx(1.0 / 15.0));
    CHECK(sum(u.q()) == 0.0);
    CHECK(entropy(u) == doctest::Approx(std::log2(15.0)));

    const AccessDistribution g = synthetic_distribution(10, "uniform-gaps", 0);
    CHECK(g.q()[0] == doctest::Approx(1.0 / 21.0));

    const AccessDistribution a = synthetic_distribution(30, "zipf:1.1", 5);
    const AccessDistribution b = synthetic_distribution(30, "zipf:1.1", 5);
    CHECK(std::vector<double>(a.p().begin(), a.p().end()) == std::vector<double>(b.p().begin(), b.p().end()));
    CHECK(sum(a.p()) + sum(a.q()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(synthetic_distribution(10, "zipf:x", 0), std::invalid_argument);
    CHECK_THROWS_AS(synthetic_distribution(10, "normal", 0), std::invalid_argument);
    CHECK_THROWS_AS(synthetic_distribution(0, "uniform", 0), std::invalid_argument);

    // uniform keys and access: the best forest stays within two of log2 n
    std::vector<gld::key_t> keys(15);
    std::iota(keys.begin(), keys.end(), 1);
    CHECK(optimize_over_k(keys, u, 4, ForestMode::Exact).best.total_cost <= std::log2(15.0) + 2.0);
}
