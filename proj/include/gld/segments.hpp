#pragma once

// Variable-width model: an epsilon-bounded piecewise-linear approximation of
// the key -> rank map, used as a partition of the universe. Queries are
// routed by binary search over the segments' first keys and answered by the
// dictionary built over that segment.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gld/core.hpp"
#include "gld/dictionaries.hpp"

namespace gld {

struct Segment {
    key_t first_key = 0;
    double slope = 0.0;
    double intercept = 0.0;  // predicted rank of first_key
    std::size_t start_rank = 0;
    std::size_t end_rank = 0;

    /// floor(intercept + slope * (x - first_key))
    std::int64_t predict(key_t x) const noexcept {
        return static_cast<std::int64_t>(std::floor(intercept + slope * static_cast<double>(x - first_key)));
    }
};

/// Greedy left-to-right segmentation. Each segment is anchored at its first
/// key and kept open while some slope keeps every member's prediction within
/// +-epsilon of its rank.
class SegmentModel {
public:
    SegmentModel() = default;
    SegmentModel(std::span<const key_t> keys, std::size_t epsilon);

    std::size_t epsilon() const noexcept { return epsilon_; }
    std::size_t size() const noexcept { return n_; }
    std::span<const Segment> segments() const noexcept { return segments_; }
    std::span<const key_t> routing_keys() const noexcept { return routing_; }
    std::size_t segment_count() const noexcept { return segments_.size(); }

    /// Segment holding x, for x >= the first key.
    std::size_t route(key_t x) const noexcept {
        const key_t* base = routing_.data();
        std::size_t len = routing_.size();
        while (len > 1) {
            const std::size_t half = len / 2;
            base = (base[half] <= x) ? base + half : base;
            len -= half;
        }
        return static_cast<std::size_t>(base - routing_.data());
    }

    /// Routing comparisons per query: ceil(log2(segment count)).
    std::size_t routing_steps() const noexcept;

    std::vector<rank_t> bounds() const;

    /// Bytes for the routing keys, slopes and intercepts.
    std::size_t model_bytes() const noexcept { return segments_.size() * 3 * sizeof(key_t); }

private:
    std::size_t epsilon_ = 0;
    std::size_t n_ = 0;
    std::vector<Segment> segments_;
    std::vector<key_t> routing_;
};

template <DictionarySet Set>
class SegmentedDictionary {
public:
    static constexpr bool self_adjusting = Set::self_adjusting;

    SegmentedDictionary(std::span<const key_t> keys, std::size_t epsilon, DictParams params = {})
        : model_(keys, epsilon), set_(keys, model_.bounds(), params) {
        if (keys.empty()) throw std::invalid_argument("cannot segment an empty key set");
    }

    SearchOutcome rank_search(key_t x) const
        requires(!Set::self_adjusting)
    {
        if (x < model_.routing_keys().front()) return {0, false};
        return set_.search(model_.route(x), x);
    }
    SearchOutcome rank_search(key_t x)
        requires(Set::self_adjusting)
    {
        if (x < model_.routing_keys().front()) return {0, false};
        return set_.search(model_.route(x), x);
    }

    const SegmentModel& model() const noexcept { return model_; }
    const Set& dictionaries() const noexcept { return set_; }
    std::size_t size() const noexcept { return set_.size(); }
    std::size_t space_bytes() const noexcept { return model_.model_bytes() + set_.overhead_bytes(); }
    double space_pct() const noexcept {
        return 100.0 * static_cast<double>(space_bytes()) / (8.0 * static_cast<double>(size()));
    }

private:
    SegmentModel model_;
    Set set_;
};

}  // namespace gld
