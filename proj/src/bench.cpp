#include "gld/bench.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

#include "gld/binning.hpp"
#include "gld/segments.hpp"

namespace gld {

namespace {

template <class Dict>
std::uint64_t run_queries(Dict& d, std::span<const key_t> qs) {
    std::uint64_t s = 0;
    for (key_t x : qs) s += d.rank_search(x).rank;
    return s;
}

template <class Set>
BenchRecord measure_plain(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                          const BenchConfig& cfg) {
    PlainDictionary<Set> d(keys, spec.params);
    BenchRecord r;
    r.dictionary_id = spec.name();
    r.model_id = "none";
    r.mean_query_ns = time_per_query(queries, [&](std::span<const key_t> qs) { return run_queries(d, qs); }, cfg);
    r.final_search_ns = r.mean_query_ns;
    r.space_overhead_pct = 100.0 * static_cast<double>(d.space_bytes()) / (8.0 * static_cast<double>(keys.size()));
    r.order_sensitive = spec.order_sensitive();
    return r;
}

template <class Set>
BenchRecord measure_binned(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                           std::size_t k, const BenchConfig& cfg) {
    BinnedDictionary<Set> d(keys, k, spec.params);
    BenchRecord r;
    r.dictionary_id = spec.name();
    r.model_id = "binning";
    r.model_param = static_cast<double>(k);
    r.intervals = k;
    r.mean_query_ns = time_per_query(queries, [&](std::span<const key_t> qs) { return run_queries(d, qs); }, cfg);
    const BinRouter& router = d.router();
    const auto bounds = d.bounds();
    r.prediction_ns = time_per_query(
        queries,
        [&](std::span<const key_t> qs) {
            std::uint64_t s = 0;
            for (key_t x : qs)
                if (x >= router.lo() && x <= router.hi()) s += bounds[router.bin_of(x)];
            return s;
        },
        cfg);
    r.final_search_ns = std::max(0.0, r.mean_query_ns - r.prediction_ns);
    r.space_overhead_pct = d.space_pct();
    r.order_sensitive = spec.order_sensitive();
    return r;
}

template <class Set>
BenchRecord measure_segmented(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                              std::size_t eps, const BenchConfig& cfg) {
    SegmentedDictionary<Set> d(keys, eps, spec.params);
    BenchRecord r;
    r.dictionary_id = spec.name();
    r.model_id = "segments";
    r.model_param = static_cast<double>(eps);
    r.intervals = d.model().segment_count();
    r.mean_query_ns = time_per_query(queries, [&](std::span<const key_t> qs) { return run_queries(d, qs); }, cfg);
    const SegmentModel& model = d.model();
    const key_t first = model.routing_keys().front();
    r.prediction_ns = time_per_query(
        queries,
        [&](std::span<const key_t> qs) {
            std::uint64_t s = 0;
            for (key_t x : qs)
                if (x >= first) s += model.route(x);
            return s;
        },
        cfg);
    r.final_search_ns = std::max(0.0, r.mean_query_ns - r.prediction_ns);
    r.space_overhead_pct = d.space_pct();
    r.order_sensitive = spec.order_sensitive();
    return r;
}

BenchRecord plain_record(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                         const BenchConfig& cfg) {
    return visit_dict(spec.kind,
                      [&]<class Set>(std::type_identity<Set>) { return measure_plain<Set>(keys, queries, spec, cfg); });
}

BenchRecord binned_record(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                          std::size_t k, const BenchConfig& cfg) {
    return visit_dict(spec.kind, [&]<class Set>(std::type_identity<Set>) {
        return measure_binned<Set>(keys, queries, spec, k, cfg);
    });
}

BenchRecord segmented_record(std::span<const key_t> keys, std::span<const key_t> queries, const DictSpec& spec,
                             std::size_t eps, const BenchConfig& cfg) {
    return visit_dict(spec.kind, [&]<class Set>(std::type_identity<Set>) {
        return measure_segmented<Set>(keys, queries, spec, eps, cfg);
    });
}

void require_keys(std::span<const key_t> keys) {
    if (keys.empty()) throw std::invalid_argument("benchmark needs a nonempty key set");
}

}  // namespace

void write_bench_header(std::ostream& out) {
    out << "schema,dataset,dict,model,param,intervals,mean_query_ns,prediction_ns,final_search_ns,"
           "space_overhead_pct,ratio_vs_plain,order_sensitive\n";
}

void write_bench_row(std::ostream& out, const BenchRecord& r) {
    out << kCsvSchema << ',' << r.dataset_id << ',' << r.dictionary_id << ',' << r.model_id << ','
        << std::setprecision(10) << r.model_param << ',' << r.intervals << ',' << r.mean_query_ns << ','
        << r.prediction_ns << ',' << r.final_search_ns << ',' << r.space_overhead_pct << ',' << r.ratio_vs_plain
        << ',' << (r.order_sensitive ? 1 : 0) << '\n';
}

std::vector<BenchRecord> bench_boost(std::span<const key_t> keys, std::span<const key_t> queries,
                                     std::span<const DictSpec> dicts, std::span<const double> pcts,
                                     const BenchConfig& cfg, const std::string& dataset_id) {
    require_keys(keys);
    std::vector<BenchRecord> out;
    for (const DictSpec& spec : dicts) {
        BenchRecord plain = plain_record(keys, queries, spec, cfg);
        plain.dataset_id = dataset_id;
        out.push_back(plain);
        for (double pct : pcts) {
            BenchRecord r = binned_record(keys, queries, spec, bins_for_percentage(keys.size(), pct), cfg);
            r.dataset_id = dataset_id;
            r.ratio_vs_plain = plain.mean_query_ns > 0.0 ? r.mean_query_ns / plain.mean_query_ns : 1.0;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<std::size_t> epsilon_grid(std::size_t n) {
    std::vector<std::size_t> eps{1};
    while (eps.back() * 2 <= n / 2) eps.push_back(eps.back() * 2);
    return eps;
}

std::vector<BenchRecord> bench_epsilon(std::span<const key_t> keys, std::span<const key_t> queries,
                                       std::span<const DictSpec> dicts, std::span<const std::size_t> epsilons,
                                       const BenchConfig& cfg, const std::string& dataset_id) {
    require_keys(keys);
    std::vector<BenchRecord> out;
    for (const DictSpec& spec : dicts) {
        BenchRecord plain = plain_record(keys, queries, spec, cfg);
        plain.dataset_id = dataset_id;
        out.push_back(plain);
        for (std::size_t eps : epsilons) {
            BenchRecord r = segmented_record(keys, queries, spec, eps, cfg);
            r.dataset_id = dataset_id;
            r.ratio_vs_plain = plain.mean_query_ns > 0.0 ? r.mean_query_ns / plain.mean_query_ns : 1.0;
            out.push_back(r);
        }
    }
    return out;
}

DeltaRow delta_row(const std::string& dataset_id, std::span<const key_t> keys) {
    DeltaRow r;
    r.dataset_id = dataset_id;
    r.n = keys.size();
    if (keys.size() >= 2) r.delta = gap_stats(keys).delta();
    const double l = keys.empty() ? 0.0 : std::log(static_cast<double>(keys.size()));
    r.ln1 = l;
    r.ln2 = l * l;
    r.ln3 = l * l * l;
    r.ln4 = l * l * l * l;
    return r;
}

void write_delta_header(std::ostream& out) { out << "schema,dataset,n,delta,ln_n,ln2_n,ln3_n,ln4_n,note\n"; }

void write_delta_row(std::ostream& out, const DeltaRow& r) {
    out << kCsvSchema << ',' << r.dataset_id << ',' << r.n << ',' << std::setprecision(10);
    if (r.delta)
        out << *r.delta;
    out << ',' << r.ln1 << ',' << r.ln2 << ',' << r.ln3 << ',' << r.ln4 << ',' << (r.delta ? "" : "fewer than two keys")
        << '\n';
}

SpaceReport space_bounded(std::span<const key_t> keys, std::span<const key_t> queries,
                          std::span<const DictSpec> dicts, std::span<const double> bounds_pct, const SpaceGrid& grid,
                          const BenchConfig& cfg, const std::string& dataset_id) {
    require_keys(keys);
    for (double b : bounds_pct)
        if (!(b > 0.0)) throw std::invalid_argument("space bounds must be positive");
    SpaceReport rep;
    std::vector<std::size_t> ks;
    for (double pct : grid.bin_pcts) ks.push_back(bins_for_percentage(keys.size(), pct));
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    const std::vector<std::size_t> eps = grid.epsilons.empty() ? epsilon_grid(keys.size()) : grid.epsilons;

    for (const DictSpec& spec : dicts) {
        for (std::size_t k : ks) rep.candidates.push_back(binned_record(keys, queries, spec, k, cfg));
        for (std::size_t e : eps) rep.candidates.push_back(segmented_record(keys, queries, spec, e, cfg));
    }
    for (BenchRecord& r : rep.candidates) r.dataset_id = dataset_id;

    for (double bound : bounds_pct) {
        for (const char* family : {"binning", "segments", "any"}) {
            SpaceRow row;
            row.bound_pct = bound;
            row.family = family;
            for (const BenchRecord& r : rep.candidates) {
                if (row.family != "any" && r.model_id != row.family) continue;
                if (r.space_overhead_pct > bound) continue;
                if (!row.best || r.mean_query_ns < row.best->mean_query_ns) row.best = r;
            }
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

void write_space_header(std::ostream& out) {
    out << "schema,bound_pct,family,status,dataset,dict,model,param,intervals,mean_query_ns,space_overhead_pct\n";
}

void write_space_row(std::ostream& out, const SpaceRow& r) {
    out << kCsvSchema << ',' << std::setprecision(10) << r.bound_pct << ',' << r.family << ',';
    if (!r.best) {
        out << "infeasible,,,,,,,\n";
        return;
    }
    const BenchRecord& b = *r.best;
    out << "ok," << b.dataset_id << ',' << b.dictionary_id << ',' << b.model_id << ',' << b.model_param << ','
        << b.intervals << ',' << b.mean_query_ns << ',' << b.space_overhead_pct << '\n';
}

}  // namespace gld
