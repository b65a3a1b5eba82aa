#include "gld/binning.hpp"

#include <cmath>
#include <stdexcept>

namespace gld {

BinRouter::BinRouter(key_t lo, key_t hi, std::size_t k) : lo_(lo), hi_(hi), span_(hi - lo), k_(k) {
    if (k == 0) throw std::invalid_argument("bin count must be at least 1");
    if (hi < lo) throw std::invalid_argument("empty bin range");
    scale_ = span_ == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(span_);
}

std::vector<rank_t> bin_bounds(std::span<const key_t> keys, const BinRouter& router) {
    require_rank_capacity(keys.size());
    const std::size_t k = router.k();
    std::vector<rank_t> bounds(k + 1, 0);
    std::size_t b = 0;  // next bin whose start is still unset
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const std::size_t bin = router.bin_of(keys[i]);
        while (b <= bin) bounds[b++] = static_cast<rank_t>(i);
    }
    while (b <= k) bounds[b++] = static_cast<rank_t>(keys.size());
    return bounds;
}

std::size_t bins_for_percentage(std::size_t n, double pct) {
    if (!(pct >= 0.0) || pct > 100.0) throw std::invalid_argument("bin percentage must lie in [0, 100]");
    const auto k = static_cast<std::size_t>(std::llround(pct * static_cast<double>(n) / 100.0));
    return k == 0 ? 1 : k;
}

}  // namespace gld
