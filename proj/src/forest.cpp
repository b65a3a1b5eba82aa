#include "gld/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numeric>
#include <string>
#include <tuple>

#include "gld/workloads.hpp"

namespace gld {

namespace {

void validate(std::span<const double> p, std::span<const double> q) {
    if (q.size() != p.size() + 1) throw std::invalid_argument("need exactly one more failure weight than keys");
    for (double v : p)
        if (!(v >= 0.0)) throw std::invalid_argument("negative or NaN key weight");
    for (double v : q)
        if (!(v >= 0.0)) throw std::invalid_argument("negative or NaN failure weight");
    if (p.size() >= RootTable::kNone) throw std::invalid_argument("too many keys for one tree");
}

// w(i, j): weight of keys [i, j) and leaves [i, j].
struct Weights {
    std::vector<double> pp;  // pp[i] = p[0..i)
    std::vector<double> qq;  // qq[i] = q[0..i)

    Weights(std::span<const double> p, std::span<const double> q) : pp(p.size() + 1, 0.0), qq(q.size() + 1, 0.0) {
        for (std::size_t i = 0; i < p.size(); ++i) pp[i + 1] = pp[i] + p[i];
        for (std::size_t i = 0; i < q.size(); ++i) qq[i + 1] = qq[i] + q[i];
    }
    double operator()(std::size_t i, std::size_t j) const noexcept { return (pp[j] - pp[i]) + (qq[j + 1] - qq[i]); }
};

// Fills depths by walking subranges; root_of(i, j) gives the root of [i, j).
template <class RootOf>
void assign_depths(BstPlan& plan, std::size_t m, RootOf&& root_of) {
    plan.key_depth.assign(m, 0);
    plan.leaf_depth.assign(m + 1, 0);
    std::vector<std::tuple<std::size_t, std::size_t, std::uint32_t>> stack{{0, m, 0}};
    while (!stack.empty()) {
        const auto [i, j, d] = stack.back();
        stack.pop_back();
        if (i == j) {
            plan.leaf_depth[i] = d;
            continue;
        }
        const std::size_t r = root_of(i, j);
        plan.key_depth[r] = d;
        stack.emplace_back(i, r, d + 1);
        stack.emplace_back(r + 1, j, d + 1);
    }
}

}  // namespace

BstPlan optimal_bst(std::span<const double> p, std::span<const double> q) {
    validate(p, q);
    const std::size_t m = p.size();
    const Weights w(p, q);
    BstPlan plan;
    plan.weight = w(0, m);
    plan.roots = RootTable(m);

    // e(i, j) shares the root table's triangular indexing
    std::vector<double> e((m + 1) * (m + 2) / 2, 0.0);
    auto cost_at = [&](std::size_t i, std::size_t j) -> double& {
        return e[i * (m + 1) - i * (i - 1) / 2 + (j - i)];
    };
    for (std::size_t len = 1; len <= m; ++len) {
        for (std::size_t i = 0; i + len <= m; ++i) {
            const std::size_t j = i + len;
            const std::size_t lo = len == 1 ? i : plan.roots.at(i, j - 1);
            const std::size_t hi = len == 1 ? i : plan.roots.at(i + 1, j);
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_r = lo;
            for (std::size_t r = lo; r <= hi; ++r) {
                const double c = cost_at(i, r) + cost_at(r + 1, j);
                if (c < best) {
                    best = c;
                    best_r = r;
                }
            }
            cost_at(i, j) = best + w(i, j);
            plan.roots.at(i, j) = static_cast<std::uint32_t>(best_r);
        }
    }
    plan.cost = cost_at(0, m);
    assign_depths(plan, m, [&](std::size_t i, std::size_t j) { return plan.roots.at(i, j); });
    return plan;
}

BstPlan approx_bst(std::span<const double> p, std::span<const double> q) {
    validate(p, q);
    const std::size_t m = p.size();
    const Weights w(p, q);
    BstPlan plan;
    plan.weight = w(0, m);
    assign_depths(plan, m, [&](std::size_t i, std::size_t j) {
        // w(i, r) - w(r + 1, j) is nondecreasing in r; take the sign change
        std::size_t lo = i, hi = j - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (w(i, mid) - w(mid + 1, j) >= 0.0)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (lo > i && std::abs(w(i, lo - 1) - w(lo, j)) <= std::abs(w(i, lo) - w(lo + 1, j))) --lo;
        return lo;
    });
    plan.cost = cost_from_depths(p, q, plan);
    return plan;
}

double cost_from_depths(std::span<const double> p, std::span<const double> q, const BstPlan& plan) {
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c += p[i] * (plan.key_depth[i] + 1.0);
    for (std::size_t j = 0; j < q.size(); ++j) c += q[j] * plan.leaf_depth[j];
    return c;
}

std::vector<BinMass> bin_weights(std::span<const key_t> keys, std::size_t k, const AccessDistribution& dist) {
    if (keys.empty()) throw std::invalid_argument("cannot bin an empty key set");
    if (dist.size() != keys.size()) throw std::invalid_argument("distribution size does not match the key count");
    const BinRouter router(keys.front(), keys.back(), k);
    const std::vector<rank_t> bounds = bin_bounds(keys, router);
    const auto p = dist.p();
    const auto q = dist.q();
    const std::size_t n = keys.size();

    std::vector<BinMass> bins(k);
    for (std::size_t b = 0; b < k; ++b) {
        BinMass& bm = bins[b];
        bm.first_rank = bounds[b];
        const std::size_t len = bounds[b + 1] - bounds[b];
        bm.p.assign(p.begin() + static_cast<std::ptrdiff_t>(bounds[b]),
                    p.begin() + static_cast<std::ptrdiff_t>(bounds[b + 1]));
        bm.q.assign(len + 1, 0.0);
    }
    bins[router.bin_of(keys.front())].q.front() += q[0];
    bins[router.bin_of(keys.back())].q.back() += q[n];

    const double lo = static_cast<double>(keys.front());
    const double width = static_cast<double>(keys.back() - keys.front()) / static_cast<double>(k);
    std::vector<double> share;
    for (std::size_t t = 1; t < n; ++t) {
        const std::size_t b1 = router.bin_of(keys[t - 1]);
        const std::size_t b2 = router.bin_of(keys[t]);
        if (b1 == b2) {
            bins[b1].q[t - bounds[b1]] += q[t];
            continue;
        }
        const double a = static_cast<double>(keys[t - 1]);
        const double c = static_cast<double>(keys[t]);
        share.assign(b2 - b1 + 1, 0.0);
        double total = 0.0;
        for (std::size_t b = b1; b <= b2; ++b) {
            const double blo = lo + width * static_cast<double>(b);
            const double bhi = b + 1 == k ? static_cast<double>(keys.back()) : lo + width * static_cast<double>(b + 1);
            const double overlap = std::max(0.0, std::min(c, bhi) - std::max(a, blo));
            share[b - b1] = overlap;
            total += overlap;
        }
        if (!(total > 0.0)) {
            share.assign(b2 - b1 + 1, 0.0);
            share[0] = total = 1.0;
        }
        // the gap's leaf is the last leaf of b1, the first leaf of b2 and
        // the only leaf of each empty bin in between
        bins[b1].q.back() += q[t] * share[0] / total;
        for (std::size_t b = b1 + 1; b <= b2; ++b) bins[b].q.front() += q[t] * share[b - b1] / total;
    }

    for (BinMass& bm : bins) {
        double s = 0.0;
        for (double v : bm.p) s += v;
        for (double v : bm.q) s += v;
        bm.weight = s;
    }
    return bins;
}

double forest_cost(const ForestPlan& plan) {
    double total = 0.0;
    for (std::size_t b = 0; b < plan.trees.size(); ++b) total += plan.weights[b] + plan.trees[b].cost;
    return total;
}

ForestPlan build_forest(std::span<const key_t> keys, const AccessDistribution& dist, std::size_t k, ForestMode mode) {
    std::vector<BinMass> bins = bin_weights(keys, k, dist);
    ForestPlan plan;
    plan.k = k;
    plan.mode = mode;
    plan.weights.reserve(k);
    plan.trees.reserve(k);
    for (const BinMass& bm : bins) {
        plan.weights.push_back(bm.weight);
        plan.trees.push_back(mode == ForestMode::Exact ? optimal_bst(bm.p, bm.q) : approx_bst(bm.p, bm.q));
    }
    plan.total_cost = forest_cost(plan);
    return plan;
}

ForestSweep optimize_over_k(std::span<const key_t> keys, const AccessDistribution& dist, std::size_t k_max,
                            ForestMode mode) {
    if (k_max == 0) throw std::invalid_argument("k_max must be at least 1");
    ForestSweep sweep;
    sweep.cost_by_k.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        ForestPlan plan = build_forest(keys, dist, k, mode);
        sweep.cost_by_k.push_back(plan.total_cost);
        if (k == 1 || plan.total_cost < sweep.best.total_cost - 1e-9) sweep.best = std::move(plan);
    }
    return sweep;
}

AccessDistribution synthetic_distribution(std::size_t n, std::string_view spec, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("distribution needs at least one key");
    std::vector<double> w(2 * n + 1, 0.0);  // slot 2i is q_i, slot 2i+1 is p_i
    if (spec == "uniform") {
        for (std::size_t i = 0; i < n; ++i) w[2 * i + 1] = 1.0;
    } else if (spec == "uniform-gaps") {
        std::fill(w.begin(), w.end(), 1.0);
    } else if (spec == "random") {
        auto rng = seeded_rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : w) v = u(rng);
    } else if (spec.starts_with("zipf:")) {
        const std::string tail(spec.substr(5));
        std::size_t used = 0;
        double s = 0.0;
        try {
            s = std::stod(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tail.size() || !(s >= 0.0)) throw std::invalid_argument("bad zipf exponent in '" + std::string(spec) + "'");
        std::vector<std::size_t> order(w.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto rng = seeded_rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r = 0; r < order.size(); ++r) w[order[r]] = std::pow(static_cast<double>(r + 1), -s);
    } else {
        throw std::invalid_argument("unknown distribution '" + std::string(spec) +
                                    "' (uniform, uniform-gaps, random, zipf:S)");
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> p(n), q(n + 1);
    for (std::size_t i = 0; i < n; ++i) p[i] = w[2 * i + 1] / total;
    for (std::size_t i = 0; i <= n; ++i) q[i] = w[2 * i] / total;
    return AccessDistribution(std::move(p), std::move(q));
}

}  // namespace gld
