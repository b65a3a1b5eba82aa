#pragma once

// Equal-width binning model. The range [A[1], A[n]] is cut into k bins of
// width (A[n]-A[1])/k; a query is routed with one ceiling division and then
// answered by the dictionary built over its bin.

#include <cstdint>
#include <span>
#include <vector>

#include "gld/core.hpp"
#include "gld/dictionaries.hpp"

namespace gld {

/// ceil(d * k / span) computed exactly with 128-bit intermediates.
class BinRouter {
public:
    BinRouter() = default;
    BinRouter(key_t lo, key_t hi, std::size_t k);

    key_t lo() const noexcept { return lo_; }
    key_t hi() const noexcept { return hi_; }
    std::size_t k() const noexcept { return k_; }

    /// 1-based bin index for lo <= x <= hi; the raw value 0 at x = lo is
    /// clamped to 1.
    std::size_t bin_index(key_t x) const noexcept { return bin_of(x) + 1; }

    /// 0-based bin for lo <= x <= hi.
    std::size_t bin_of(key_t x) const noexcept {
        if (span_ == 0) return 0;
        using u128 = unsigned __int128;
        const key_t d = x - lo_;
        const u128 num = static_cast<u128>(d) * k_;
        auto q = static_cast<std::uint64_t>(static_cast<double>(d) * scale_);
        while (static_cast<u128>(q) * span_ < num) ++q;
        while (q > 0 && static_cast<u128>(q - 1) * span_ >= num) --q;
        return q == 0 ? 0 : static_cast<std::size_t>(q - 1);
    }

private:
    key_t lo_ = 0;
    key_t hi_ = 0;
    key_t span_ = 0;
    std::size_t k_ = 1;
    double scale_ = 0.0;
};

/// Bin bounds: entry b is the rank of the first key in bin b (0-based); the
/// last entry is n. Also serves as the cumulative rank for empty bins.
std::vector<rank_t> bin_bounds(std::span<const key_t> keys, const BinRouter& router);

/// k for a bin count given as a percentage of n; 0% maps to one bin.
std::size_t bins_for_percentage(std::size_t n, double pct);

template <DictionarySet Set>
class BinnedDictionary {
public:
    static constexpr bool self_adjusting = Set::self_adjusting;

    /// Throws std::invalid_argument for k = 0 or an empty key set.
    BinnedDictionary(std::span<const key_t> keys, std::size_t k, DictParams params = {}) {
        if (k == 0) throw std::invalid_argument("bin count must be at least 1");
        if (keys.empty()) throw std::invalid_argument("cannot bin an empty key set");
        require_rank_capacity(keys.size());
        router_ = BinRouter(keys.front(), keys.back(), k);
        set_ = Set(keys, bin_bounds(keys, router_), params);
    }

    SearchOutcome rank_search(key_t x) const
        requires(!Set::self_adjusting)
    {
        if (x < router_.lo()) return {0, false};
        if (x > router_.hi()) return {set_.size(), false};
        return set_.search(router_.bin_of(x), x);
    }
    SearchOutcome rank_search(key_t x)
        requires(Set::self_adjusting)
    {
        if (x < router_.lo()) return {0, false};
        if (x > router_.hi()) return {set_.size(), false};
        return set_.search(router_.bin_of(x), x);
    }

    /// 1-based bin index of x, which must lie in [A[1], A[n]].
    std::size_t bin_index(key_t x) const noexcept { return router_.bin_index(x); }
    const BinRouter& router() const noexcept { return router_; }

    std::size_t size() const noexcept { return set_.size(); }
    std::size_t bin_count() const noexcept { return router_.k(); }
    std::size_t bin_size(std::size_t b) const noexcept { return set_.interval_size(b); }
    std::span<const rank_t> bounds() const noexcept { return set_.bounds(); }

    std::size_t max_bin_load() const noexcept {
        std::size_t m = 0;
        for (std::size_t b = 0; b < bin_count(); ++b) m = std::max(m, bin_size(b));
        return m;
    }
    std::size_t empty_bins() const noexcept {
        std::size_t e = 0;
        for (std::size_t b = 0; b < bin_count(); ++b) e += bin_size(b) == 0;
        return e;
    }

    /// Model overhead: routing header plus the dictionaries' bytes beyond the
    /// 8n-byte key array.
    std::size_t space_bytes() const noexcept { return sizeof(BinRouter) + set_.overhead_bytes(); }
    double space_pct() const noexcept {
        return 100.0 * static_cast<double>(space_bytes()) / (8.0 * static_cast<double>(size()));
    }

    const Set& dictionaries() const noexcept { return set_; }

private:
    BinRouter router_;
    Set set_;
};

}  // namespace gld
