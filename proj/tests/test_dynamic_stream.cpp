#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "gld/dynamic_stream.hpp"
#include "gld/workloads.hpp"

using namespace gld;

TEST_CASE("operation mix parsing") {
    const StreamMix m = StreamMix::parse("2:1:0.5");
    CHECK(m.insert == 2.0);
    CHECK(m.erase == 1.0);
    CHECK(m.search == 0.5);
    CHECK_THROWS_AS(StreamMix::parse("1:1"), std::invalid_argument);
    CHECK_THROWS_AS(StreamMix::parse("1:1:1:1"), std::invalid_argument);
    CHECK_THROWS_AS(StreamMix::parse("a:1:1"), std::invalid_argument);
    CHECK_THROWS_AS(StreamMix::parse("0:0:0"), std::invalid_argument);
    CHECK_THROWS_AS(StreamMix::parse("-1:1:1"), std::invalid_argument);
}

TEST_CASE("streams are deterministic and inserts name absent keys") {
    const auto init = gen_uniform(500, 1000000, 1);
    StreamSpec spec;
    spec.ops = 5000;
    spec.universe_hi = 999999;
    spec.seed = 12;
    const UpdateStream a = gen_update_stream(init.keys(), spec);
    const UpdateStream b = gen_update_stream(init.keys(), spec);
    REQUIRE(a.ops.size() == 5000);
    bool same = true;
    for (std::size_t i = 0; i < a.ops.size(); ++i) same &= a.ops[i].kind == b.ops[i].kind && a.ops[i].key == b.ops[i].key;
    CHECK(same);

    std::set<gld::key_t> present(init.begin(), init.end());
    std::size_t fresh = 0, inserts = 0;
    for (const StreamOp& op : a.ops) {
        if (op.kind == OpKind::Insert) {
            ++inserts;
            fresh += present.insert(op.key).second;
        } else if (op.kind == OpKind::Delete) {
            present.erase(op.key);
        }
        CHECK(op.key <= spec.universe_hi);
    }
    CHECK(fresh == inserts);
}

TEST_CASE("pure searches never rebuild") {
    const auto init = gen_uniform(1000, 1000000, 2);
    StreamSpec spec;
    spec.ops = 3000;
    spec.mix = StreamMix::parse("0:0:1");
    spec.universe_hi = 999999;
    const DynStreamResult r = run_dyn_stream(init.keys(), gen_update_stream(init.keys(), spec), 1000, 5);
    CHECK(r.ledger.events.empty());
    CHECK(r.report.touches_per_update == 0.0);
    CHECK(r.rows.size() == 5);
    CHECK(r.rows.back().ops_done == 3000);
}

TEST_CASE("a half-window of inserts fires one update-count rebuild") {
    // one dense run plus a far key: every new gap stays inside the budget
    std::vector<gld::key_t> init;
    for (gld::key_t v = 0; v < 100; ++v) init.push_back(v);
    init.push_back(1000000000);
    UpdateStream stream;
    for (gld::key_t i = 1; i <= 50; ++i) stream.ops.push_back({OpKind::Insert, 1000000 * i});
    const DynStreamResult r = run_dyn_stream(init, stream, 64, 1);
    REQUIRE(r.ledger.events.size() == 1);
    CHECK(r.ledger.events[0].trigger == RebuildTrigger::UpdateCount);
    CHECK(r.ledger.events[0].updates_in_window == 50);
    CHECK(r.n_max == 151);
}

TEST_CASE("adversarial streams grow the gap ratio a logarithmic number of times") {
    const auto init = gen_uniform(2000, std::uint64_t{1} << 32, 5);
    StreamSpec spec;
    spec.ops = 20000;
    spec.mix = StreamMix::parse("1:0:1");
    spec.adversarial = true;
    spec.universe_hi = (std::uint64_t{1} << 40) - 1;
    spec.seed = 3;
    const DynStreamResult r = run_dyn_stream(init.keys(), gen_update_stream(init.keys(), spec), 2000, 4);
    const std::size_t growth = r.ledger.count(RebuildTrigger::DeltaGrowth);
    CHECK(growth >= 1);
    const double bound = std::log2(r.ledger.delta_max_seen.value() / r.ledger.initial_delta_hat.value()) + 1.0;
    CHECK(static_cast<double>(growth) <= bound);
}

TEST_CASE("divergence errors carry the op index") {
    const DivergenceError e(17, "search result");
    CHECK(e.op_index() == 17);
    CHECK(std::string(e.what()).find("17") != std::string::npos);
}
