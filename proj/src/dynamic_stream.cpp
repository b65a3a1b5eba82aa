#include "gld/dynamic_stream.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>

#include "gld/workloads.hpp"

namespace gld {

namespace {

double parse_weight(std::string_view part, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || !(v >= 0.0))
        throw std::invalid_argument("bad operation mix '" + std::string(text) + "', expected i:d:s weights");
    return v;
}

// Set mirror with O(1) random picks and ordered gap bookkeeping.
class Mirror {
public:
    explicit Mirror(std::span<const key_t> keys) : ordered_(keys.begin(), keys.end()) {
        list_.assign(keys.begin(), keys.end());
        for (std::size_t i = 0; i < list_.size(); ++i) pos_[list_[i]] = i;
        for (std::size_t i = 1; i < keys.size(); ++i) gaps_.emplace(keys[i] - keys[i - 1], keys[i - 1]);
    }

    std::size_t size() const noexcept { return list_.size(); }
    bool contains(key_t x) const { return pos_.count(x) != 0; }
    key_t pick(std::mt19937_64& rng) const {
        return list_[std::uniform_int_distribution<std::size_t>(0, list_.size() - 1)(rng)];
    }
    key_t min() const { return *ordered_.begin(); }
    key_t max() const { return *ordered_.rbegin(); }
    bool has_gaps() const noexcept { return !gaps_.empty(); }
    std::pair<key_t, key_t> smallest_gap() const { return *gaps_.begin(); }
    key_t largest_gap() const { return gaps_.rbegin()->first; }

    void insert(key_t x) {
        auto [it, fresh] = ordered_.insert(x);
        if (!fresh) return;
        pos_[x] = list_.size();
        list_.push_back(x);
        const bool has_prev = it != ordered_.begin();
        const auto next = std::next(it);
        const bool has_next = next != ordered_.end();
        if (has_prev && has_next) gaps_.erase(gaps_.find({*next - *std::prev(it), *std::prev(it)}));
        if (has_prev) gaps_.emplace(x - *std::prev(it), *std::prev(it));
        if (has_next) gaps_.emplace(*next - x, x);
    }

    void erase(key_t x) {
        const auto found = pos_.find(x);
        if (found == pos_.end()) return;
        const std::size_t i = found->second;
        list_[i] = list_.back();
        pos_[list_[i]] = i;
        list_.pop_back();
        pos_.erase(x);
        const auto it = ordered_.find(x);
        const bool has_prev = it != ordered_.begin();
        const auto next = std::next(it);
        const bool has_next = next != ordered_.end();
        if (has_prev) gaps_.erase(gaps_.find({x - *std::prev(it), *std::prev(it)}));
        if (has_next) gaps_.erase(gaps_.find({*next - x, x}));
        if (has_prev && has_next) gaps_.emplace(*next - *std::prev(it), *std::prev(it));
        ordered_.erase(it);
    }

private:
    std::set<key_t> ordered_;
    std::vector<key_t> list_;
    std::unordered_map<key_t, std::size_t> pos_;
    std::set<std::pair<key_t, key_t>> gaps_;  // (gap, left key)
};

std::optional<key_t> random_absent(const Mirror& m, const StreamSpec& spec, std::mt19937_64& rng) {
    const std::uint64_t universe = spec.universe_hi - spec.universe_lo;  // size - 1
    if (m.size() > universe) return std::nullopt;
    std::uniform_int_distribution<key_t> draw(spec.universe_lo, spec.universe_hi);
    key_t x;
    do x = draw(rng);
    while (m.contains(x));
    return x;
}

std::optional<key_t> adversarial_insert(const Mirror& m, const StreamSpec& spec, std::mt19937_64& rng) {
    if (m.has_gaps()) {
        const auto [g, left] = m.smallest_gap();
        if (g >= 2) return left + g / 2;
        const key_t big = m.largest_gap();
        if (big <= UINT64_MAX / 2) {
            const key_t reach = 2 * big;
            if (m.max() <= spec.universe_hi && spec.universe_hi - m.max() >= reach) return m.max() + reach;
            if (m.min() >= spec.universe_lo && m.min() - spec.universe_lo >= reach) return m.min() - reach;
        }
    }
    return random_absent(m, spec, rng);
}

}  // namespace

StreamMix StreamMix::parse(std::string_view text) {
    StreamMix mix;
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (a == std::string_view::npos || b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
        throw std::invalid_argument("bad operation mix '" + std::string(text) + "', expected i:d:s weights");
    mix.insert = parse_weight(text.substr(0, a), text);
    mix.erase = parse_weight(text.substr(a + 1, b - a - 1), text);
    mix.search = parse_weight(text.substr(b + 1), text);
    if (mix.insert + mix.erase + mix.search <= 0.0) throw std::invalid_argument("operation mix sums to zero");
    return mix;
}

UpdateStream gen_update_stream(std::span<const key_t> initial, const StreamSpec& spec) {
    if (spec.universe_hi < spec.universe_lo) throw std::invalid_argument("empty stream universe");
    UpdateStream stream;
    stream.spec = spec;
    stream.ops.reserve(spec.ops);
    Mirror m(initial);
    auto rng = seeded_rng(spec.seed);
    std::discrete_distribution<int> kind({spec.mix.insert, spec.mix.erase, spec.mix.search});
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution delete_hit(std::clamp(spec.delete_present, 0.0, 1.0));
    std::uniform_int_distribution<key_t> any(spec.universe_lo, spec.universe_hi);

    for (std::size_t i = 0; i < spec.ops; ++i) {
        int k = kind(rng);
        if (k == 0) {
            const auto x = spec.adversarial ? adversarial_insert(m, spec, rng) : random_absent(m, spec, rng);
            if (x) {
                stream.ops.push_back({OpKind::Insert, *x});
                m.insert(*x);
                continue;
            }
            k = 2;  // universe saturated
        }
        if (k == 1) {
            if (m.size() > 0) {
                const key_t x = delete_hit(rng) ? m.pick(rng) : any(rng);
                stream.ops.push_back({OpKind::Delete, x});
                m.erase(x);
                continue;
            }
            k = 2;
        }
        const key_t x = (m.size() > 0 && coin(rng)) ? m.pick(rng) : any(rng);
        stream.ops.push_back({OpKind::Search, x});
    }
    return stream;
}

DynStreamResult run_dyn_stream(std::span<const key_t> initial, const UpdateStream& stream, std::size_t k,
                               std::size_t phases) {
    DynamicBinDict dict(initial, k);
    std::vector<key_t> oracle(initial.begin(), initial.end());
    DynStreamResult res;
    res.n_max = oracle.size();
    const std::size_t total = stream.ops.size();
    phases = std::max<std::size_t>(phases, 1);
    std::size_t next_phase = 0;

    auto emit = [&](std::size_t done) {
        const RebuildLedger& led = dict.ledger();
        DynPhaseRow row;
        row.ops_done = done;
        row.n = dict.size();
        row.update_rebuilds = led.count(RebuildTrigger::UpdateCount);
        row.delta_rebuilds = led.count(RebuildTrigger::DeltaGrowth);
        row.forced_rebuilds = static_cast<std::size_t>(
            std::count_if(led.events.begin(), led.events.end(), [](const RebuildEvent& e) { return e.out_of_range; }));
        row.touches_per_update = dict.amortized_report().touches_per_update;
        row.delta_hat = dict.delta_hat().value();
        row.max_divergence = 0;
        row.max_bin_load = dict.max_bin_load();
        res.rows.push_back(row);
    };

    for (std::size_t i = 0; i < total; ++i) {
        const StreamOp& op = stream.ops[i];
        const auto it = std::lower_bound(oracle.begin(), oracle.end(), op.key);
        const bool present = it != oracle.end() && *it == op.key;
        switch (op.kind) {
            case OpKind::Insert:
                if (dict.insert(op.key) != !present) throw DivergenceError(i, "insert result");
                if (!present) oracle.insert(it, op.key);
                break;
            case OpKind::Delete:
                if (dict.erase(op.key) != present) throw DivergenceError(i, "delete result");
                if (present) oracle.erase(it);
                break;
            case OpKind::Search: {
                const SearchOutcome got = dict.search(op.key);
                const SearchOutcome want{static_cast<std::size_t>(it - oracle.begin()), present};
                if (got != want) throw DivergenceError(i, "search outcome");
                break;
            }
        }
        if (dict.size() != oracle.size()) throw DivergenceError(i, "element count");
        res.n_max = std::max(res.n_max, oracle.size());
        while (next_phase < phases && i + 1 == total * (next_phase + 1) / phases) {
            emit(i + 1);
            ++next_phase;
        }
    }
    if (res.rows.empty()) emit(0);
    res.ledger = dict.ledger();
    res.report = dict.amortized_report();
    return res;
}

}  // namespace gld
