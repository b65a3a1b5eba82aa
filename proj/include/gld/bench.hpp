#pragma once

// Measurement harness behind the command-line tool: boosting and epsilon
// sweeps, the gap-ratio report and space-bounded model selection.
//
// Timing protocol: one warm-up pass, then `repeats` timed passes over the
// identical query sequence; the median pass is reported per query.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gld/core.hpp"
#include "gld/dictionaries.hpp"

namespace gld {

inline constexpr int kCsvSchema = 1;

struct BenchConfig {
    std::size_t repeats = 5;
    std::size_t warmup = 1;
};

/// Median nanoseconds per query of `run(queries)`, which must return a
/// checksum so the work cannot be elided.
template <class Run>
double time_per_query(std::span<const key_t> queries, Run&& run, const BenchConfig& cfg) {
    static volatile std::uint64_t sink = 0;
    if (queries.empty()) return 0.0;
    for (std::size_t i = 0; i < cfg.warmup; ++i) sink = sink + run(queries);
    std::vector<double> passes;
    const std::size_t reps = cfg.repeats == 0 ? 1 : cfg.repeats;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        sink = sink + run(queries);
        const auto t1 = std::chrono::steady_clock::now();
        passes.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    }
    std::nth_element(passes.begin(), passes.begin() + static_cast<std::ptrdiff_t>(passes.size() / 2), passes.end());
    return passes[passes.size() / 2] / static_cast<double>(queries.size());
}

struct BenchRecord {
    std::string dataset_id;
    std::string dictionary_id;
    std::string model_id;  // none | binning | segments
    double model_param = 0.0;
    std::size_t intervals = 1;  // bins or segments
    double mean_query_ns = 0.0;
    double prediction_ns = 0.0;
    double final_search_ns = 0.0;
    double space_overhead_pct = 0.0;
    double ratio_vs_plain = 1.0;
    bool order_sensitive = false;
};

void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRecord& r);

/// One plain row per dictionary, then one binning row per percentage
/// (k = round(pct * n / 100), at least 1).
std::vector<BenchRecord> bench_boost(std::span<const key_t> keys, std::span<const key_t> queries,
                                     std::span<const DictSpec> dicts, std::span<const double> pcts,
                                     const BenchConfig& cfg, const std::string& dataset_id);

/// Powers of two in [1, n/2] (just 1 when n < 2).
std::vector<std::size_t> epsilon_grid(std::size_t n);

/// One plain row per dictionary, then one segments row per epsilon.
std::vector<BenchRecord> bench_epsilon(std::span<const key_t> keys, std::span<const key_t> queries,
                                       std::span<const DictSpec> dicts, std::span<const std::size_t> epsilons,
                                       const BenchConfig& cfg, const std::string& dataset_id);

struct DeltaRow {
    std::string dataset_id;
    std::size_t n = 0;
    std::optional<double> delta;  // empty below two keys
    double ln1 = 0.0, ln2 = 0.0, ln3 = 0.0, ln4 = 0.0;
};

DeltaRow delta_row(const std::string& dataset_id, std::span<const key_t> keys);
void write_delta_header(std::ostream& out);
void write_delta_row(std::ostream& out, const DeltaRow& r);

struct SpaceGrid {
    std::vector<double> bin_pcts = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 25, 50, 100};
    std::vector<std::size_t> epsilons;  // empty: epsilon_grid(n)
};

struct SpaceRow {
    double bound_pct = 0.0;
    std::string family;  // binning | segments | any
    std::optional<BenchRecord> best;
};

struct SpaceReport {
    std::vector<BenchRecord> candidates;
    std::vector<SpaceRow> rows;
};

/// Measures every (dictionary, k) binning and (dictionary, epsilon)
/// segments configuration once, then for each bound reports the fastest one
/// per family whose space overhead is at most the bound.
SpaceReport space_bounded(std::span<const key_t> keys, std::span<const key_t> queries,
                          std::span<const DictSpec> dicts, std::span<const double> bounds_pct, const SpaceGrid& grid,
                          const BenchConfig& cfg, const std::string& dataset_id);

void write_space_header(std::ostream& out);
void write_space_row(std::ostream& out, const SpaceRow& r);

}  // namespace gld
