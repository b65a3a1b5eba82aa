#pragma once

// Dynamic binning dictionary. The bins cover the extended range
// [A[1] - L*D, A[n] + L*D] (L = A[n] - A[1], D the gap-ratio budget) and each
// holds a splay tree. The structure is rebuilt after n/2 updates, or as soon
// as the gap ratio of the stored keys may exceed D; in the latter case D
// becomes max(exact ratio, 2 * old D).
//
// Not thread-safe: every operation, searches included, needs exclusive
// access.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gld/core.hpp"
#include "gld/splay_tree.hpp"

namespace gld {

using i128 = __int128;
using u128 = unsigned __int128;

/// Nonnegative exact rational with 128-bit terms.
struct Ratio {
    u128 num = 0;
    u128 den = 1;

    static Ratio of(u128 num, u128 den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    /// 2 * this, saturating at 2^64 (above any achievable gap ratio).
    Ratio doubled() const noexcept;

    friend int compare(const Ratio& a, const Ratio& b) noexcept;
    friend bool operator==(const Ratio& a, const Ratio& b) noexcept { return compare(a, b) == 0; }
    friend bool operator<(const Ratio& a, const Ratio& b) noexcept { return compare(a, b) < 0; }
    friend bool operator>(const Ratio& a, const Ratio& b) noexcept { return compare(a, b) > 0; }
};

enum class RebuildTrigger { UpdateCount, DeltaGrowth };

struct RebuildEvent {
    RebuildTrigger trigger;
    std::size_t elements_touched;   // element count at rebuild time
    std::size_t updates_in_window;  // updates since the previous rebuild
    std::size_t window_limit;       // max(1, floor(n_at_previous_rebuild / 2))
    bool out_of_range;              // forced by an insert outside the range
    Ratio delta_hat;                // budget after the rebuild
};

struct RebuildLedger {
    std::size_t total_updates = 0;
    std::vector<RebuildEvent> events;
    Ratio initial_delta_hat;
    Ratio delta_max_seen;

    std::size_t count(RebuildTrigger t) const noexcept;
    std::size_t elements_touched() const noexcept;
    /// True while no gap-ratio rebuild has happened: the ratio bound was
    /// known up front and rebuild work stays linear.
    bool delta_static() const noexcept { return count(RebuildTrigger::DeltaGrowth) == 0; }
};

struct AmortizedReport {
    double touches_per_update = 0.0;
    double delta_max = 0.0;
};

class DynamicBinDict {
public:
    /// Throws std::invalid_argument for fewer than two keys or k = 0.
    DynamicBinDict(std::span<const key_t> keys, std::size_t k);

    SearchOutcome search(key_t x);
    SearchOutcome rank_search(key_t x) { return search(x); }
    /// False when x is already present (nothing changes).
    bool insert(key_t x);
    /// False when x is absent (nothing changes).
    bool erase(key_t x);
    /// Applies the rebuild rules; returns whether a rebuild happened.
    bool maybe_rebuild();

    AmortizedReport amortized_report() const noexcept;
    const RebuildLedger& ledger() const noexcept { return ledger_; }

    std::size_t size() const noexcept { return n_; }
    std::size_t bin_count() const noexcept { return k_; }
    const Ratio& delta_hat() const noexcept { return delta_hat_; }
    key_t span_at_rebuild() const noexcept { return span_; }
    i128 range_lo() const noexcept { return range_lo_; }
    i128 range_hi() const noexcept { return range_hi_; }
    u128 bin_width() const noexcept { return width_; }
    std::size_t n_at_rebuild() const noexcept { return n_at_rebuild_; }
    std::size_t updates_since_rebuild() const noexcept { return updates_since_; }
    key_t g_min_bound() const noexcept { return g_min_bound_; }
    key_t g_max_bound() const noexcept { return g_max_bound_; }

    std::size_t bin_load(std::size_t b) const noexcept { return pool_.size(roots_[b]); }
    std::size_t max_bin_load() const noexcept;
    /// All keys in order (full scan).
    std::vector<key_t> keys() const;
    /// Exact gap ratio of the current contents; nullopt below two keys.
    std::optional<Ratio> exact_delta() const;
    /// Structural self-check of every bin (debug tests).
    bool check() const;

private:
    std::size_t bin_of(key_t x) const noexcept;
    bool in_range(key_t x) const noexcept { return static_cast<i128>(x) >= range_lo_ && static_cast<i128>(x) <= range_hi_; }
    std::optional<key_t> predecessor(std::size_t b, key_t x);
    std::optional<key_t> successor(std::size_t b, key_t x);
    void note_gap(key_t gap) noexcept;
    void rebuild(RebuildTrigger trigger, std::vector<key_t> keys, bool out_of_range);
    void layout(const std::vector<key_t>& keys);
    std::size_t window_limit() const noexcept { return n_at_rebuild_ / 2 == 0 ? 1 : n_at_rebuild_ / 2; }

    // bins holding at least one key, for neighbor lookups across bins
    void mark(std::size_t b, bool nonempty) noexcept;
    std::optional<std::size_t> prev_nonempty(std::size_t b) const noexcept;
    std::optional<std::size_t> next_nonempty(std::size_t b) const noexcept;

    // Fenwick tree over bin sizes
    void fenwick_add(std::size_t b, std::int64_t delta) noexcept;
    std::size_t keys_before(std::size_t b) const noexcept;

    std::size_t k_;
    std::size_t n_ = 0;
    SplayPool pool_;
    std::vector<SplayPool::index_t> roots_;
    std::vector<std::uint64_t> occupied_;
    std::vector<std::uint64_t> occupied_summary_;
    std::vector<std::int64_t> fenwick_;

    Ratio delta_hat_;
    key_t span_ = 0;
    i128 range_lo_ = 0;
    i128 range_hi_ = 0;
    u128 width_ = 1;
    std::size_t n_at_rebuild_ = 0;
    std::size_t updates_since_ = 0;
    key_t g_min_bound_ = 0;
    key_t g_max_bound_ = 0;
    RebuildLedger ledger_;
};

}  // namespace gld
