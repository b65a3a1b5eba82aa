#pragma once

// Key files, synthetic data sets, query workloads and CDF-preserving
// subsampling.
//
// Key file format: an 8-byte little-endian count followed by that many
// 8-byte little-endian keys.

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gld/core.hpp"

namespace gld {

struct LoadedKeys {
    SortedKeySet keys;
    std::size_t duplicates_removed = 0;
};

/// Throws std::runtime_error naming the byte offset on a short or overlong
/// file.
LoadedKeys load_keys(const std::filesystem::path& path);
void save_keys(std::span<const key_t> keys, const std::filesystem::path& path);

/// Same format, order preserved (query files).
std::vector<key_t> load_key_sequence(const std::filesystem::path& path);
inline void save_key_sequence(std::span<const key_t> keys, const std::filesystem::path& path) {
    save_keys(keys, path);
}

/// Generator for stream `stream` of a seeded experiment.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// n distinct keys drawn uniformly from [0, universe_size). The universe
/// hint of the result is [0, universe_size - 1].
SortedKeySet gen_uniform(std::size_t n, std::uint64_t universe_size, std::uint64_t seed);

/// (1 - outlier_fraction) * n keys spread uniformly over a band of `spread`
/// consecutive values in the middle of the 64-bit range, plus outliers split
/// between both ends of the range (at least one when outlier_fraction > 0).
SortedKeySet gen_clustered(std::size_t n, double outlier_fraction, std::uint64_t spread, std::uint64_t seed);

struct QueryWorkload {
    std::vector<key_t> queries;
    std::vector<bool> present;
    double hit_fraction = 0.0;
    std::uint64_t seed = 0;

    double realized_hit_fraction() const noexcept;
};

/// m queries in shuffled order: round(m * hit_fraction) keys drawn with
/// replacement from the set, the rest drawn uniformly from the universe
/// minus the set. The universe is the set's hint, else [front, back].
QueryWorkload gen_queries(const SortedKeySet& keys, std::size_t m, double hit_fraction, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov distance between sorted samples.
double ks_statistic(std::span<const key_t> a, std::span<const key_t> b);
/// Rejection threshold of the two-sample test at level alpha (asymptotic).
double ks_critical(std::size_t n, std::size_t m, double alpha = 0.05);

/// Equal-width histogram over [lo, hi] with add-one smoothing, normalized.
std::vector<double> histogram_pdf(std::span<const key_t> keys, key_t lo, key_t hi, std::size_t bins);
/// sum a * ln(a / b); zero entries of a contribute nothing.
double kl_divergence(std::span<const double> a, std::span<const double> b);

struct SubsampleTrial {
    double ks = 0.0;
    double kl = 0.0;
    bool accepted = false;
};

struct SubsampleResult {
    SortedKeySet sample;
    std::vector<SubsampleTrial> trials;
    std::size_t chosen_trial = 0;
    double ks_threshold = 0.0;

    double acceptance_rate() const noexcept;
    double chosen_kl() const noexcept { return trials[chosen_trial].kl; }
};

class SubsampleError : public std::runtime_error {
public:
    SubsampleError(const std::string& what, std::vector<SubsampleTrial> trials)
        : std::runtime_error(what), trials_(std::move(trials)) {}
    const std::vector<SubsampleTrial>& trials() const noexcept { return trials_; }

private:
    std::vector<SubsampleTrial> trials_;
};

/// Draws `trials` uniform subsamples of size target_n, keeps those the KS
/// test does not reject at 5%, and returns the kept one whose histogram is
/// closest to the source's in KL divergence. Histograms use
/// ceil(sqrt(target_n)) equal-width bins over the source range.
SubsampleResult subsample_matching_cdf(const SortedKeySet& keys, std::size_t target_n, std::size_t trials,
                                       std::uint64_t seed);

}  // namespace gld
