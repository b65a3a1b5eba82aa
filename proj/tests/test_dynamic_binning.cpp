#include "doctest.h"

#include <random>
#include <set>
#include <vector>

#include "gld/dynamic_binning.hpp"
#include "gld/workloads.hpp"
#include "oracles.hpp"

using namespace gld;

namespace {

const std::vector<gld::key_t> kFixture = {47, 105, 140, 289, 316, 358, 386, 398, 819, 939};

std::vector<gld::key_t> sorted_of(const std::set<gld::key_t>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("exact ratios") {
    CHECK(Ratio::of(421, 12) == Ratio::of(842, 24));
    CHECK(Ratio::of(1, 3) < Ratio::of(334, 1000));
    CHECK(Ratio::of(7, 2) > Ratio::of(3, 1));
    CHECK(Ratio::of(10, 1).doubled() == Ratio::of(20, 1));
    const Ratio big = Ratio::of(u128{1} << 63, 1).doubled().doubled();
    CHECK(big == Ratio::of(u128{1} << 64, 1));
    CHECK(Ratio::of(421, 12).value() == doctest::Approx(35.0833333));
    // ratios that differ only far below double precision
    const u128 m = ~std::uint64_t{0};
    CHECK(Ratio::of(m, m - 1) < Ratio::of(m - 1, m - 2));
    CHECK_FALSE(Ratio::of(m, m - 1) == Ratio::of(m - 1, m - 2));
}

TEST_CASE("initial build on the fixture") {
    DynamicBinDict d(kFixture, 4);
    CHECK(d.delta_hat() == Ratio::of(421, 12));
    CHECK(d.span_at_rebuild() == 892);
    CHECK(d.range_lo() == -31248);
    CHECK(d.range_hi() == 32234);
    CHECK(d.bin_count() == 4);
    CHECK(d.size() == 10);
    CHECK(d.keys() == kFixture);
    CHECK(d.ledger().events.empty());
    CHECK(d.amortized_report().touches_per_update == 0.0);
    for (gld::key_t x = 0; x < 1100; ++x) REQUIRE(d.search(x) == oracle::lower(kFixture, x));
    CHECK(d.check());
}

TEST_CASE("equally spaced keys get a budget of one") {
    std::vector<gld::key_t> keys;
    for (gld::key_t v = 0; v < 20; ++v) keys.push_back(1000 + 10 * v);
    DynamicBinDict d(keys, 5);
    CHECK(d.delta_hat() == Ratio::of(1, 1));
    CHECK(d.range_lo() == 1000 - 190);
    CHECK(d.range_hi() == 1190 + 190);
}

TEST_CASE("construction errors") {
    const std::vector<gld::key_t> one = {4};
    CHECK_THROWS_AS(DynamicBinDict(one, 3), std::invalid_argument);
    CHECK_THROWS_AS(DynamicBinDict(kFixture, 0), std::invalid_argument);
}

TEST_CASE("k = 1 behaves as one dynamic dictionary") {
    DynamicBinDict d(kFixture, 1);
    CHECK(d.insert(500));
    CHECK(d.search(500) == SearchOutcome{8, true});
    CHECK(d.max_bin_load() == 11);
}

TEST_CASE("duplicate inserts and missing deletes change nothing") {
    DynamicBinDict d(kFixture, 4);
    CHECK_FALSE(d.insert(316));
    CHECK_FALSE(d.erase(317));
    CHECK_FALSE(d.erase(~gld::key_t{0}));
    CHECK(d.updates_since_rebuild() == 0);
    CHECK(d.ledger().total_updates == 0);
}

TEST_CASE("half-window of inserts fires one update-count rebuild") {
    // g_min = 1 and a huge gap leave room for inserts that never raise the ratio
    std::vector<gld::key_t> keys;
    for (gld::key_t v = 0; v < 10; ++v) keys.push_back(v);
    keys.push_back(1000000);
    DynamicBinDict d(keys, 4);
    const Ratio budget = d.delta_hat();
    REQUIRE(d.n_at_rebuild() == 11);
    for (gld::key_t i = 1; i <= 4; ++i) {
        CHECK(d.insert(1000 * i));
        CHECK(d.ledger().events.empty());
    }
    CHECK(d.insert(5000));
    REQUIRE(d.ledger().events.size() == 1);
    const RebuildEvent& e = d.ledger().events.front();
    CHECK(e.trigger == RebuildTrigger::UpdateCount);
    CHECK(e.elements_touched == 16);
    CHECK(e.updates_in_window == 5);
    CHECK(e.window_limit == 5);
    CHECK_FALSE(e.out_of_range);
    CHECK(d.delta_hat() == budget);
    CHECK(d.n_at_rebuild() == 16);
    CHECK(d.updates_since_rebuild() == 0);
    CHECK(d.amortized_report().touches_per_update == doctest::Approx(16.0 / 5.0));
}

TEST_CASE("gap growth below twice the budget doubles it") {
    const std::vector<gld::key_t> keys = {0, 10, 110, 210, 310, 410};
    DynamicBinDict d(keys, 4);
    REQUIRE(d.delta_hat() == Ratio::of(10, 1));
    CHECK(d.insert(117));  // gaps 7 and 93: ratio 100/7
    REQUIRE(d.ledger().events.size() == 1);
    CHECK(d.ledger().events[0].trigger == RebuildTrigger::DeltaGrowth);
    CHECK(d.delta_hat() == Ratio::of(20, 1));
    CHECK(d.ledger().delta_max_seen == Ratio::of(20, 1));
}

TEST_CASE("gap growth past twice the budget adopts the new ratio") {
    const std::vector<gld::key_t> keys = {0, 10, 110, 210, 310, 410};
    DynamicBinDict d(keys, 4);
    CHECK(d.insert(112));  // gaps 2 and 98: ratio 50 = 5 * 10
    REQUIRE(d.ledger().events.size() == 1);
    CHECK(d.ledger().events[0].trigger == RebuildTrigger::DeltaGrowth);
    CHECK(d.delta_hat() == Ratio::of(50, 1));
}

TEST_CASE("no trigger leaves the structure untouched") {
    const std::vector<gld::key_t> keys = {0, 10, 110, 210, 310, 410};
    DynamicBinDict d(keys, 4);
    CHECK(d.insert(160));  // gaps 50 and 50
    CHECK_FALSE(d.maybe_rebuild());
    CHECK(d.ledger().events.empty());
    CHECK(d.delta_hat() == Ratio::of(10, 1));
}

TEST_CASE("deleting next to the largest gap merges it") {
    const std::vector<gld::key_t> keys = {0, 10, 20, 120, 130};
    DynamicBinDict d(keys, 3);
    REQUIRE(d.g_max_bound() == 100);
    CHECK(d.erase(120));
    CHECK(d.g_max_bound() == 110);
    CHECK(d.keys() == std::vector<gld::key_t>{0, 10, 20, 130});
}

TEST_CASE("inserts outside the range force a rebuild") {
    DynamicBinDict d(kFixture, 4);
    CHECK(d.insert(100000));
    REQUIRE(d.ledger().events.size() == 1);
    const RebuildEvent& e = d.ledger().events[0];
    CHECK(e.out_of_range);
    CHECK(e.trigger == RebuildTrigger::DeltaGrowth);
    CHECK(d.range_hi() >= 100000);
    CHECK(d.search(100000) == SearchOutcome{10, true});
    for (gld::key_t k : kFixture) CHECK(d.search(k).found);
    // the budget at least doubled
    CHECK_FALSE(d.delta_hat() < Ratio::of(421, 12).doubled());
}

TEST_CASE("every key survives a forced rebuild") {
    const auto keys = gen_uniform(2000, 1 << 24, 9);
    DynamicBinDict d(keys.keys(), 100);
    CHECK(d.insert(~gld::key_t{0}));
    CHECK(d.insert(0) == !std::binary_search(keys.begin(), keys.end(), 0));
    for (gld::key_t k : keys) REQUIRE(d.search(k).found);
    CHECK(d.check());
}

TEST_CASE("search in a structure emptied by deletes") {
    const std::vector<gld::key_t> keys = {5, 9};
    DynamicBinDict d(keys, 2);
    CHECK(d.erase(5));
    CHECK(d.erase(9));
    CHECK(d.size() == 0);
    CHECK(d.search(5) == SearchOutcome{0, false});
    CHECK(d.search(7) == SearchOutcome{0, false});
    CHECK(d.insert(7));
    CHECK(d.search(7) == SearchOutcome{0, true});
}

TEST_CASE("random interleaved operations match a sorted oracle") {
    std::mt19937_64 rng(2024);
    const auto init = gen_uniform(3000, 9000000, 3);
    std::set<gld::key_t> mirror(init.begin(), init.end());
    DynamicBinDict d(init.keys(), 3000);
    std::vector<gld::key_t> sorted = sorted_of(mirror);
    std::size_t bad = 0;
    for (int op = 0; op < 100000; ++op) {
        const gld::key_t x = rng() % 9000000;
        switch (rng() % 3) {
            case 0:
                if (d.insert(x) != mirror.insert(x).second) ++bad;
                sorted.clear();
                break;
            case 1:
                if (d.erase(x) != (mirror.erase(x) == 1)) ++bad;
                sorted.clear();
                break;
            default: {
                if (sorted.empty()) sorted = sorted_of(mirror);
                if (!(d.search(x) == oracle::lower(sorted, x))) ++bad;
            }
        }
        if (op % 10000 == 0) {
            REQUIRE(d.check());
            // between rebuilds the budget covers the true ratio
            if (auto ex = d.exact_delta()) CHECK_FALSE(*ex > d.delta_hat());
            CHECK(d.updates_since_rebuild() < d.n_at_rebuild() / 2 + 1);
        }
    }
    CHECK(bad == 0);
    CHECK(d.keys() == sorted_of(mirror));
    const auto& ev = d.ledger().events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        CHECK(ev[i].updates_in_window <= ev[i].window_limit);
        if (ev[i].trigger == RebuildTrigger::DeltaGrowth) {
            // each growth rebuild at least doubles the budget
            const Ratio before = i == 0 ? d.ledger().initial_delta_hat : ev[i - 1].delta_hat;
            CHECK_FALSE(ev[i].delta_hat < before.doubled());
        }
    }
}
