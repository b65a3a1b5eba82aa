#include "gld/segments.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace gld {

namespace {

struct SlopeRange {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();  // exclusive
};

// Tightens the range so that the member at local offset t (distance dx from
// the anchor) predicts within [t - eps, t + eps].
bool tighten(SlopeRange& r, double dx, double t, double eps) {
    const double lo = std::max(r.lo, (t - eps) / dx);
    const double hi = std::min(r.hi, (t + eps + 1.0) / dx);
    if (!(lo < hi)) return false;
    r.lo = lo;
    r.hi = hi;
    return true;
}

double pick_slope(const SlopeRange& r) {
    if (r.hi == std::numeric_limits<double>::infinity()) return 0.0;  // single key
    return r.lo + (r.hi - r.lo) / 2.0;
}

}  // namespace

SegmentModel::SegmentModel(std::span<const key_t> keys, std::size_t epsilon) : epsilon_(epsilon), n_(keys.size()) {
    require_rank_capacity(keys.size());
    const double eps = static_cast<double>(epsilon);
    const auto ieps = static_cast<std::int64_t>(std::min<std::size_t>(epsilon, std::numeric_limits<std::int64_t>::max()));
    std::size_t start = 0;
    while (start < n_) {
        const key_t x0 = keys[start];
        SlopeRange range;
        std::size_t end = start + 1;
        while (end < n_ && tighten(range, static_cast<double>(keys[end] - x0), static_cast<double>(end - start), eps))
            ++end;

        // The slope is checked with the same arithmetic used at query time;
        // rounding at a range edge shortens the segment.
        Segment seg;
        while (true) {
            seg = Segment{x0, pick_slope(range), static_cast<double>(start), start, end};
            std::size_t bad = end;
            for (std::size_t m = start + 1; m < end; ++m) {
                const std::int64_t err = seg.predict(keys[m]) - static_cast<std::int64_t>(m);
                if (err > ieps || err < -ieps) {
                    bad = m;
                    break;
                }
            }
            if (bad == end) break;
            end = bad;
            range = SlopeRange{};
            for (std::size_t m = start + 1; m < end; ++m)
                tighten(range, static_cast<double>(keys[m] - x0), static_cast<double>(m - start), eps);
        }
        segments_.push_back(seg);
        routing_.push_back(x0);
        start = end;
    }
}

std::size_t SegmentModel::routing_steps() const noexcept {
    const std::size_t s = segments_.size();
    return s <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(s - 1));
}

std::vector<rank_t> SegmentModel::bounds() const {
    std::vector<rank_t> b;
    b.reserve(segments_.size() + 1);
    for (const Segment& s : segments_) b.push_back(static_cast<rank_t>(s.start_rank));
    b.push_back(static_cast<rank_t>(n_));
    if (segments_.empty()) b.front() = 0;
    return b;
}

}  // namespace gld
