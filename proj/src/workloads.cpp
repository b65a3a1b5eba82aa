#include "gld/workloads.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

namespace gld {

namespace {

void put_le(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint64_t get_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<key_t> parse_keys(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 8) throw std::runtime_error("truncated at offset " + std::to_string(bytes.size()));
    const std::uint64_t count = get_le(bytes.data());
    const std::uint64_t payload = bytes.size() - 8;
    if (count > payload / 8) throw std::runtime_error("truncated at offset " + std::to_string(bytes.size()));
    if (payload != count * 8)
        throw std::runtime_error("unexpected trailing bytes at offset " + std::to_string(8 + count * 8));
    std::vector<key_t> keys(count);
    for (std::uint64_t i = 0; i < count; ++i) keys[i] = get_le(bytes.data() + 8 + 8 * i);
    return keys;
}

}  // namespace

LoadedKeys load_keys(const std::filesystem::path& path) {
    LoadedKeys out;
    out.keys = SortedKeySet::from_unsorted(parse_keys(read_all(path)), &out.duplicates_removed);
    return out;
}

std::vector<key_t> load_key_sequence(const std::filesystem::path& path) { return parse_keys(read_all(path)); }

void save_keys(std::span<const key_t> keys, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    put_le(out, keys.size());
    for (key_t k : keys) put_le(out, k);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

SortedKeySet gen_uniform(std::size_t n, std::uint64_t universe_size, std::uint64_t seed) {
    if (n > universe_size) throw std::invalid_argument("more keys requested than the universe holds");
    auto rng = seeded_rng(seed);
    std::vector<key_t> keys;
    keys.reserve(n);
    if (universe_size / 16 <= n) {
        // dense: selection sampling over the whole universe
        std::uint64_t need = n;
        for (std::uint64_t t = 0; need > 0; ++t) {
            if (std::uniform_int_distribution<std::uint64_t>(0, universe_size - t - 1)(rng) < need) {
                keys.push_back(t);
                --need;
            }
        }
    } else {
        // sparse: draw, deduplicate, top up, then drop a uniform excess
        std::uniform_int_distribution<std::uint64_t> draw(0, universe_size - 1);
        while (keys.size() < n) {
            const std::size_t missing = n - keys.size();
            for (std::size_t i = 0; i < missing + missing / 16 + 1; ++i) keys.push_back(draw(rng));
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        }
        std::vector<key_t> kept;
        kept.reserve(n);
        std::ranges::sample(keys, std::back_inserter(kept), static_cast<std::ptrdiff_t>(n), rng);
        keys = std::move(kept);
    }
    SortedKeySet out(std::move(keys));
    if (universe_size > 0) out.set_universe_hint({0, universe_size - 1});
    return out;
}

SortedKeySet gen_clustered(std::size_t n, double outlier_fraction, std::uint64_t spread, std::uint64_t seed) {
    if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0))
        throw std::invalid_argument("outlier fraction must lie in [0, 1]");
    std::size_t outliers = static_cast<std::size_t>(std::llround(outlier_fraction * static_cast<double>(n)));
    if (outlier_fraction > 0.0 && n > 0) outliers = std::max<std::size_t>(outliers, 1);
    const std::size_t band = n - outliers;
    if (spread < band) throw std::invalid_argument("band spread smaller than the number of band keys");

    constexpr std::uint64_t kEdge = std::uint64_t{1} << 40;  // width of each outlier zone
    constexpr std::uint64_t kTop = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t band_lo = (std::uint64_t{1} << 63) - spread / 2;
    if (spread > kTop - 2 * kEdge) throw std::invalid_argument("band spread too wide");

    const SortedKeySet core = gen_uniform(band, spread, seed);
    auto rng = seeded_rng(seed, 1);
    std::vector<key_t> keys;
    keys.reserve(n);
    for (key_t k : core) keys.push_back(band_lo + k);
    const std::size_t low = outliers / 2;
    for (key_t k : gen_uniform(low, kEdge, rng())) keys.push_back(k);
    for (key_t k : gen_uniform(outliers - low, kEdge, rng())) keys.push_back(kTop - k);
    SortedKeySet out = SortedKeySet::from_unsorted(std::move(keys));
    out.set_universe_hint({0, kTop});
    return out;
}

double QueryWorkload::realized_hit_fraction() const noexcept {
    if (present.empty()) return 0.0;
    return static_cast<double>(std::count(present.begin(), present.end(), true)) /
           static_cast<double>(present.size());
}

QueryWorkload gen_queries(const SortedKeySet& keys, std::size_t m, double hit_fraction, std::uint64_t seed) {
    if (keys.empty()) throw std::invalid_argument("cannot draw queries from an empty key set");
    if (!(hit_fraction >= 0.0 && hit_fraction <= 1.0)) throw std::invalid_argument("hit fraction must lie in [0, 1]");
    const auto [ulo, uhi] = keys.universe();
    const std::size_t hits = static_cast<std::size_t>(std::llround(hit_fraction * static_cast<double>(m)));
    const std::size_t misses = m - hits;
    const bool saturated = uhi - ulo == keys.size() - 1;
    if (misses > 0 && saturated) throw std::invalid_argument("universe saturated: no absent keys to query");

    auto rng = seeded_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
    std::uniform_int_distribution<std::uint64_t> draw(ulo, uhi);
    const auto span = keys.keys();

    QueryWorkload w;
    w.hit_fraction = hit_fraction;
    w.seed = seed;
    w.queries.reserve(m);
    for (std::size_t i = 0; i < hits; ++i) w.queries.push_back(span[pick(rng)]);
    for (std::size_t i = 0; i < misses; ++i) {
        key_t x;
        do x = draw(rng);
        while (std::binary_search(span.begin(), span.end(), x));
        w.queries.push_back(x);
    }
    std::shuffle(w.queries.begin(), w.queries.end(), rng);
    w.present.reserve(m);
    for (key_t x : w.queries) w.present.push_back(std::binary_search(span.begin(), span.end(), x));
    return w;
}

double ks_statistic(std::span<const key_t> a, std::span<const key_t> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS statistic needs nonempty samples");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const key_t x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    return c * std::sqrt((dn + dm) / (dn * dm));
}

std::vector<double> histogram_pdf(std::span<const key_t> keys, key_t lo, key_t hi, std::size_t bins) {
    if (keys.empty()) throw std::invalid_argument("histogram of an empty sample");
    if (bins == 0 || hi < lo) throw std::invalid_argument("bad histogram shape");
    std::vector<double> h(bins, 1.0);
    const long double width = (static_cast<long double>(hi - lo) + 1.0L) / static_cast<long double>(bins);
    for (key_t k : keys) {
        if (k < lo || k > hi) continue;
        auto b = static_cast<std::size_t>(static_cast<long double>(k - lo) / width);
        h[std::min(b, bins - 1)] += 1.0;
    }
    const double total = static_cast<double>(keys.size() + bins);
    for (double& v : h) v /= total;
    return h;
}

double kl_divergence(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || a.size() != b.size()) throw std::invalid_argument("KL divergence needs equal nonempty PDFs");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        if (b[i] == 0.0) throw std::invalid_argument("KL divergence undefined: reference PDF has a zero bin");
        d += a[i] * std::log(a[i] / b[i]);
    }
    return std::max(0.0, d);
}

double SubsampleResult::acceptance_rate() const noexcept {
    if (trials.empty()) return 0.0;
    return static_cast<double>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.accepted; })) /
           static_cast<double>(trials.size());
}

SubsampleResult subsample_matching_cdf(const SortedKeySet& keys, std::size_t target_n, std::size_t trials,
                                       std::uint64_t seed) {
    if (keys.empty()) throw std::invalid_argument("cannot subsample an empty key set");
    if (target_n == 0 || target_n >= keys.size()) throw std::invalid_argument("target size must lie in [1, n)");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const auto src = keys.keys();
    const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(target_n))));
    const std::vector<double> src_pdf = histogram_pdf(src, keys.front(), keys.back(), bins);

    SubsampleResult res;
    res.ks_threshold = ks_critical(src.size(), target_n);
    std::vector<key_t> best, draw;
    bool have = false;
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = seeded_rng(seed, t);
        draw.clear();
        draw.reserve(target_n);
        std::ranges::sample(src, std::back_inserter(draw), static_cast<std::ptrdiff_t>(target_n), rng);
        SubsampleTrial trial;
        trial.ks = ks_statistic(src, draw);
        trial.kl = kl_divergence(src_pdf, histogram_pdf(draw, keys.front(), keys.back(), bins));
        trial.accepted = trial.ks <= res.ks_threshold;
        if (trial.accepted && (!have || trial.kl < res.trials[res.chosen_trial].kl)) {
            have = true;
            res.chosen_trial = t;
            best.swap(draw);
        }
        res.trials.push_back(trial);
    }
    if (!have) throw SubsampleError("every subsample was rejected by the KS test", std::move(res.trials));
    res.sample = SortedKeySet(std::move(best));
    return res;
}

}  // namespace gld
