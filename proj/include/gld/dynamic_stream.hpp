#pragma once

// Update streams for the dynamic binning dictionary, and a replay driver
// that checks every answer against a sorted-vector oracle.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gld/dynamic_binning.hpp"

namespace gld {

enum class OpKind { Insert, Delete, Search };

struct StreamOp {
    OpKind kind;
    key_t key;
};

struct StreamMix {
    double insert = 1.0;
    double erase = 1.0;
    double search = 1.0;

    /// "i:d:s" relative weights, e.g. "2:1:1".
    static StreamMix parse(std::string_view text);
};

struct StreamSpec {
    std::size_t ops = 0;
    StreamMix mix;
    /// Inserts try to grow the gap ratio: halve the smallest gap while it is
    /// at least 2, otherwise place a key twice the largest gap beyond an end.
    bool adversarial = false;
    key_t universe_lo = 0;
    key_t universe_hi = UINT64_MAX;
    /// Probability that a delete names a present key (else a random one).
    double delete_present = 1.0;
    std::uint64_t seed = 0;
};

struct UpdateStream {
    std::vector<StreamOp> ops;
    StreamSpec spec;
};

/// Deterministic per seed. Inserts always name absent keys; searches hit a
/// present key half of the time.
UpdateStream gen_update_stream(std::span<const key_t> initial, const StreamSpec& spec);

struct DynPhaseRow {
    std::size_t ops_done = 0;
    std::size_t n = 0;
    std::size_t update_rebuilds = 0;
    std::size_t delta_rebuilds = 0;
    std::size_t forced_rebuilds = 0;  // inserts outside the covered range
    double touches_per_update = 0.0;
    double delta_hat = 0.0;
    std::size_t max_divergence = 0;
    std::size_t max_bin_load = 0;
};

struct DynStreamResult {
    std::vector<DynPhaseRow> rows;
    RebuildLedger ledger;
    AmortizedReport report;
    std::size_t n_max = 0;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t op_index, const std::string& what)
        : std::runtime_error("oracle divergence at op " + std::to_string(op_index) + ": " + what), index_(op_index) {}
    std::size_t op_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Replays the stream and emits `phases` evenly spaced rows (the last one
/// after the final op). Throws DivergenceError on the first wrong answer.
DynStreamResult run_dyn_stream(std::span<const key_t> initial, const UpdateStream& stream, std::size_t k,
                               std::size_t phases = 10);

}  // namespace gld
