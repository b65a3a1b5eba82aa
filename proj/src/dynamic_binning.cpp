#include "gld/dynamic_binning.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace gld {

namespace {

constexpr u128 kRatioCap = static_cast<u128>(1) << 64;
// Range extension cap; any extension this wide already covers every u64 key.
constexpr u128 kExtensionCap = static_cast<u128>(1) << 66;

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t mask_upto(unsigned r) { return r == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (r + 1)) - 1; }

// ceil(L * delta), saturating at kExtensionCap; delta.den < 2^64.
u128 extension(key_t span, const Ratio& delta) {
    const u128 q = delta.num / delta.den;
    const u128 r = delta.num % delta.den;
    if (q != 0 && q > kExtensionCap / span) return kExtensionCap;
    u128 ext = static_cast<u128>(span) * q;
    const u128 part = static_cast<u128>(span) * r;
    ext += part / delta.den + (part % delta.den != 0);
    return std::min(ext, kExtensionCap);
}

}  // namespace

Ratio Ratio::of(u128 num, u128 den) {
    if (den == 0) throw std::invalid_argument("ratio with zero denominator");
    const u128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Ratio{num, den};
}

Ratio Ratio::doubled() const noexcept {
    if (compare(*this, Ratio{kRatioCap / 2, 1}) >= 0) return Ratio{kRatioCap, 1};
    if (den % 2 == 0) return Ratio{num, den / 2};
    return Ratio{num * 2, den};
}

int compare(const Ratio& a, const Ratio& b) noexcept {
    // continued-fraction expansion of both sides, term by term
    u128 p = a.num, q = a.den, r = b.num, s = b.den;
    while (true) {
        const u128 ip = p / q, ir = r / s;
        if (ip != ir) return ip < ir ? -1 : 1;
        p %= q;
        r %= s;
        if (p == 0 && r == 0) return 0;
        if (p == 0) return -1;
        if (r == 0) return 1;
        // p/q vs r/s  <=>  s/r vs q/p
        const u128 np = s, nq = r, nr = q, ns = p;
        p = np;
        q = nq;
        r = nr;
        s = ns;
    }
}

std::size_t RebuildLedger::count(RebuildTrigger t) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [t](const RebuildEvent& e) { return e.trigger == t; }));
}

std::size_t RebuildLedger::elements_touched() const noexcept {
    std::size_t total = 0;
    for (const RebuildEvent& e : events) total += e.elements_touched;
    return total;
}

DynamicBinDict::DynamicBinDict(std::span<const key_t> keys, std::size_t k) : k_(k) {
    if (k == 0) throw std::invalid_argument("bin count must be at least 1");
    if (keys.size() < 2) throw std::invalid_argument("insufficient keys for gaps");
    require_rank_capacity(keys.size());
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (keys[i] <= keys[i - 1]) throw std::invalid_argument("keys must be strictly increasing");

    roots_.assign(k_, SplayPool::nil);
    occupied_.assign((k_ + 63) / 64, 0);
    occupied_summary_.assign((occupied_.size() + 63) / 64, 0);
    fenwick_.assign(k_ + 1, 0);

    const GapStats gs = gap_stats(keys);
    delta_hat_ = Ratio::of(gs.g_max, gs.g_min);
    ledger_.initial_delta_hat = delta_hat_;
    ledger_.delta_max_seen = delta_hat_;

    std::vector<key_t> copy(keys.begin(), keys.end());
    n_ = copy.size();
    n_at_rebuild_ = n_;
    g_min_bound_ = gs.g_min;
    g_max_bound_ = gs.g_max;
    layout(copy);
}

void DynamicBinDict::layout(const std::vector<key_t>& keys) {
    pool_.clear();
    pool_.reserve(keys.size());
    std::fill(roots_.begin(), roots_.end(), SplayPool::nil);
    std::fill(occupied_.begin(), occupied_.end(), 0);
    std::fill(occupied_summary_.begin(), occupied_summary_.end(), 0);
    std::fill(fenwick_.begin(), fenwick_.end(), 0);
    if (keys.empty()) return;  // range kept from the previous layout

    span_ = std::max<key_t>(1, keys.back() - keys.front());
    const u128 ext = extension(span_, delta_hat_);
    range_lo_ = static_cast<i128>(keys.front()) - static_cast<i128>(ext);
    range_hi_ = static_cast<i128>(keys.back()) + static_cast<i128>(ext);
    const auto count = static_cast<u128>(range_hi_ - range_lo_) + 1;
    width_ = (count + k_ - 1) / k_;

    std::size_t i = 0;
    while (i < keys.size()) {
        const std::size_t b = bin_of(keys[i]);
        std::size_t j = i + 1;
        while (j < keys.size() && bin_of(keys[j]) == b) ++j;
        roots_[b] = pool_.build(std::span<const key_t>(keys).subspan(i, j - i));
        mark(b, true);
        fenwick_add(b, static_cast<std::int64_t>(j - i));
        i = j;
    }
}

std::size_t DynamicBinDict::bin_of(key_t x) const noexcept {
    const auto off = static_cast<u128>(static_cast<i128>(x) - range_lo_);
    constexpr u128 u64max = std::numeric_limits<std::uint64_t>::max();
    if (off <= u64max && width_ <= u64max)
        return static_cast<std::size_t>(static_cast<std::uint64_t>(off) / static_cast<std::uint64_t>(width_));
    return static_cast<std::size_t>(off / width_);
}

SearchOutcome DynamicBinDict::search(key_t x) {
    if (static_cast<i128>(x) < range_lo_) return {0, false};
    if (static_cast<i128>(x) > range_hi_) return {n_, false};
    const std::size_t b = bin_of(x);
    const SearchOutcome local = pool_.search(roots_[b], x);
    return {keys_before(b) + local.rank, local.found};
}

std::optional<key_t> DynamicBinDict::predecessor(std::size_t b, key_t x) {
    if (auto p = pool_.predecessor(roots_[b], x)) return p;
    if (auto pb = prev_nonempty(b)) return pool_.predecessor(roots_[*pb], x);
    return std::nullopt;
}

std::optional<key_t> DynamicBinDict::successor(std::size_t b, key_t x) {
    if (auto s = pool_.successor(roots_[b], x)) return s;
    if (auto nb = next_nonempty(b)) return pool_.successor(roots_[*nb], x);
    return std::nullopt;
}

void DynamicBinDict::note_gap(key_t gap) noexcept {
    g_min_bound_ = std::min(g_min_bound_, gap);
    g_max_bound_ = std::max(g_max_bound_, gap);
}

bool DynamicBinDict::insert(key_t x) {
    if (!in_range(x)) {
        // Outside the range the new extreme gap exceeds L * D, so the gap
        // ratio has grown past the budget.
        std::vector<key_t> all = keys();
        if (all.empty() || x > all.back())
            all.push_back(x);
        else
            all.insert(all.begin(), x);
        ++updates_since_;
        ++ledger_.total_updates;
        rebuild(RebuildTrigger::DeltaGrowth, std::move(all), true);
        return true;
    }
    const std::size_t b = bin_of(x);
    if (!pool_.insert(roots_[b], x)) return false;
    ++n_;
    fenwick_add(b, 1);
    mark(b, true);
    if (auto p = predecessor(b, x)) note_gap(x - *p);
    if (auto s = successor(b, x)) note_gap(*s - x);
    ++updates_since_;
    ++ledger_.total_updates;
    maybe_rebuild();
    return true;
}

bool DynamicBinDict::erase(key_t x) {
    if (!in_range(x)) return false;
    const std::size_t b = bin_of(x);
    if (!pool_.erase(roots_[b], x)) return false;
    --n_;
    fenwick_add(b, -1);
    if (roots_[b] == SplayPool::nil) mark(b, false);
    const auto p = predecessor(b, x);
    const auto s = successor(b, x);
    if (p && s) note_gap(*s - *p);
    ++updates_since_;
    ++ledger_.total_updates;
    maybe_rebuild();
    return true;
}

bool DynamicBinDict::maybe_rebuild() {
    if (updates_since_ >= window_limit()) {
        rebuild(RebuildTrigger::UpdateCount, keys(), false);
        return true;
    }
    if (n_ >= 2 && g_min_bound_ > 0 && g_max_bound_ > 0 && Ratio::of(g_max_bound_, g_min_bound_) > delta_hat_) {
        rebuild(RebuildTrigger::DeltaGrowth, keys(), false);
        return true;
    }
    return false;
}

void DynamicBinDict::rebuild(RebuildTrigger trigger, std::vector<key_t> keys, bool out_of_range) {
    const std::size_t window = window_limit();
    const std::size_t updates = updates_since_;
    n_ = keys.size();

    std::optional<Ratio> exact;
    if (n_ >= 2) {
        const GapStats gs = gap_stats(keys);
        exact = Ratio::of(gs.g_max, gs.g_min);
        g_min_bound_ = gs.g_min;
        g_max_bound_ = gs.g_max;
    } else {
        g_min_bound_ = std::numeric_limits<key_t>::max();
        g_max_bound_ = 0;
    }
    // the budget never shrinks; a ratio above it is always a growth rebuild
    if (exact && *exact > delta_hat_) trigger = RebuildTrigger::DeltaGrowth;
    if (trigger == RebuildTrigger::DeltaGrowth) {
        const Ratio twice = delta_hat_.doubled();
        delta_hat_ = (exact && *exact > twice) ? *exact : twice;
    }

    layout(keys);
    n_at_rebuild_ = n_;
    updates_since_ = 0;
    ledger_.events.push_back(RebuildEvent{trigger, n_, updates, window, out_of_range, delta_hat_});
    if (delta_hat_ > ledger_.delta_max_seen) ledger_.delta_max_seen = delta_hat_;
}

AmortizedReport DynamicBinDict::amortized_report() const noexcept {
    AmortizedReport r;
    if (ledger_.total_updates > 0)
        r.touches_per_update =
            static_cast<double>(ledger_.elements_touched()) / static_cast<double>(ledger_.total_updates);
    r.delta_max = ledger_.delta_max_seen.value();
    return r;
}

std::size_t DynamicBinDict::max_bin_load() const noexcept {
    std::size_t m = 0;
    for (std::size_t b = 0; b < k_; ++b) m = std::max(m, bin_load(b));
    return m;
}

std::vector<key_t> DynamicBinDict::keys() const {
    std::vector<key_t> out;
    out.reserve(n_ + 1);
    for (std::size_t b = 0; b < k_; ++b) pool_.for_each(roots_[b], [&](key_t x) { out.push_back(x); });
    return out;
}

std::optional<Ratio> DynamicBinDict::exact_delta() const {
    const std::vector<key_t> all = keys();
    if (all.size() < 2) return std::nullopt;
    const GapStats gs = gap_stats(all);
    return Ratio::of(gs.g_max, gs.g_min);
}

bool DynamicBinDict::check() const {
    std::size_t total = 0;
    for (std::size_t b = 0; b < k_; ++b) {
        if (!pool_.check(roots_[b])) return false;
        const std::size_t load = bin_load(b);
        if (keys_before(b) != total) return false;
        const bool bit = (occupied_[b / 64] >> (b % 64)) & 1;
        if (bit != (load > 0)) return false;
        bool ok = true;
        pool_.for_each(roots_[b], [&](key_t x) { ok = ok && in_range(x) && bin_of(x) == b; });
        if (!ok) return false;
        total += load;
    }
    for (std::size_t w = 0; w < occupied_.size(); ++w)
        if (((occupied_summary_[w / 64] >> (w % 64)) & 1) != (occupied_[w] != 0)) return false;
    return total == n_;
}

void DynamicBinDict::mark(std::size_t b, bool nonempty) noexcept {
    const std::size_t w = b / 64;
    const std::uint64_t bit = std::uint64_t{1} << (b % 64);
    occupied_[w] = nonempty ? (occupied_[w] | bit) : (occupied_[w] & ~bit);
    const std::uint64_t sbit = std::uint64_t{1} << (w % 64);
    auto& s = occupied_summary_[w / 64];
    s = occupied_[w] != 0 ? (s | sbit) : (s & ~sbit);
}

std::optional<std::size_t> DynamicBinDict::prev_nonempty(std::size_t b) const noexcept {
    if (b == 0) return std::nullopt;
    const std::size_t i = b - 1;
    std::size_t w = i / 64;
    const std::uint64_t word = occupied_[w] & mask_upto(static_cast<unsigned>(i % 64));
    if (word != 0) return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(word));
    if (w == 0) return std::nullopt;
    const std::size_t j = w - 1;
    std::size_t sw = j / 64;
    std::uint64_t s = occupied_summary_[sw] & mask_upto(static_cast<unsigned>(j % 64));
    while (true) {
        if (s != 0) {
            w = sw * 64 + 63 - static_cast<std::size_t>(std::countl_zero(s));
            return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(occupied_[w]));
        }
        if (sw == 0) return std::nullopt;
        s = occupied_summary_[--sw];
    }
}

std::optional<std::size_t> DynamicBinDict::next_nonempty(std::size_t b) const noexcept {
    const std::size_t i = b + 1;
    if (i >= k_) return std::nullopt;
    std::size_t w = i / 64;
    const std::uint64_t word = occupied_[w] & (~std::uint64_t{0} << (i % 64));
    if (word != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
    const std::size_t j = w + 1;
    if (j >= occupied_.size()) return std::nullopt;
    std::size_t sw = j / 64;
    std::uint64_t s = occupied_summary_[sw] & (~std::uint64_t{0} << (j % 64));
    while (true) {
        if (s != 0) {
            w = sw * 64 + static_cast<std::size_t>(std::countr_zero(s));
            return w * 64 + static_cast<std::size_t>(std::countr_zero(occupied_[w]));
        }
        if (++sw >= occupied_summary_.size()) return std::nullopt;
        s = occupied_summary_[sw];
    }
}

void DynamicBinDict::fenwick_add(std::size_t b, std::int64_t delta) noexcept {
    for (std::size_t i = b + 1; i <= k_; i += i & (~i + 1)) fenwick_[i] += delta;
}

std::size_t DynamicBinDict::keys_before(std::size_t b) const noexcept {
    std::int64_t s = 0;
    for (std::size_t i = b; i > 0; i -= i & (~i + 1)) s += fenwick_[i];
    return static_cast<std::size_t>(s);
}

}  // namespace gld
