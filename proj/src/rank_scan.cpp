#include "jointorbit/rank_scan.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jointorbit {

namespace {

struct TrialResult {
    bool failed = true;
    int rank = -1;
    PointTuple tuple;
};

// Sequential accumulation step shared by both kernels.
// Returns true when the scan should stop (saturation).
bool absorb(ScanOutcome& out, std::uint64_t trial, const TrialResult& res, int upper_bound) {
    ++out.trials_run;
    if (res.failed) {
        ++out.failed_trials;
        return false;
    }
    if (res.rank > out.max_rank) {
        out.max_rank = res.rank;
        out.witness_trial = static_cast<long long>(trial);
        out.witness = res.tuple;
        out.attain_count = 1;
    } else if (res.rank == out.max_rank) {
        ++out.attain_count;
    }
    if (out.max_rank >= upper_bound) {
        out.saturated = true;
        return true;
    }
    return false;
}

TrialResult run_trial(const TrialEval& eval, std::uint64_t trial) {
    TrialResult r;
    auto v = eval(trial);
    if (v) {
        r.failed = false;
        r.rank = v->first;
        r.tuple = std::move(v->second);
    }
    return r;
}

} // namespace

bool ScanOutcome::same_as(const ScanOutcome& o) const {
    if (max_rank != o.max_rank || witness_trial != o.witness_trial ||
        attain_count != o.attain_count || trials_run != o.trials_run ||
        failed_trials != o.failed_trials || saturated != o.saturated)
        return false;
    if (witness.pts != o.witness.pts) return false;
    if (witness.has_exact() != o.witness.has_exact()) return false;
    if (witness.has_exact() && !(*witness.exact == *o.witness.exact)) return false;
    return true;
}

ScanOutcome scan_max_rank_serial(const TrialEval& eval, std::uint64_t first_trial,
                                 long long trials, int upper_bound) {
    ScanOutcome out;
    for (long long t = 0; t < trials; ++t) {
        if (absorb(out, first_trial + static_cast<std::uint64_t>(t),
                   run_trial(eval, first_trial + static_cast<std::uint64_t>(t)), upper_bound))
            break;
    }
    return out;
}

ScanOutcome scan_max_rank(const TrialEval& eval, std::uint64_t first_trial, long long trials,
                          int upper_bound) {
#ifndef _OPENMP
    return scan_max_rank_serial(eval, first_trial, trials, upper_bound);
#else
    ScanOutcome out;
    // The first block stays small so early exit on saturation wastes little
    // work; later blocks grow to amortize the parallel-region setup.
    long long block = std::max<long long>(4 * omp_get_max_threads(), 8);
    bool done = false;
    long long base = 0;
    while (base < trials && !done) {
        const long long count = std::min(block, trials - base);
        std::vector<TrialResult> results(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < count; ++i) {
            results[static_cast<std::size_t>(i)] =
                run_trial(eval, first_trial + static_cast<std::uint64_t>(base + i));
        }
        // absorb in index order so the outcome matches the serial kernel
        for (long long i = 0; i < count; ++i) {
            if (absorb(out, first_trial + static_cast<std::uint64_t>(base + i),
                       results[static_cast<std::size_t>(i)], upper_bound)) {
                done = true;
                break;
            }
        }
        base += count;
        block = std::min<long long>(block * 4, 4096);
    }
    return out;
#endif
}

void merge_scan(ScanOutcome& a, const ScanOutcome& b) {
    if (b.max_rank > a.max_rank) {
        a.max_rank = b.max_rank;
        a.witness_trial = b.witness_trial;
        a.witness = b.witness;
        a.attain_count = b.attain_count;
    } else if (b.max_rank == a.max_rank) {
        a.attain_count += b.attain_count;
    }
    a.trials_run += b.trials_run;
    a.failed_trials += b.failed_trials;
    a.saturated = a.saturated || b.saturated;
}

// --------------------------------------------------------------------------

namespace {

Backend scan_backend(const ActionSpec& spec, const SampleCfg& cfg) {
    const bool exact_tuple = cfg.exact.value_or(spec.polynomial) && spec.polynomial;
    return choose_backend(spec.polynomial, exact_tuple, cfg.exact);
}

GenericRankResult from_scan(const ActionSpec& spec, Backend backend, ScanOutcome&& scan) {
    if (scan.max_rank < 0)
        throw NumericError("every sampled tuple hit an evaluation domain error; the box is "
                           "incompatible with spec '" + spec.name + "'");
    GenericRankResult res;
    res.rank = scan.max_rank;
    res.witness = scan.witness;
    res.backend = backend;
    res.heuristic = backend == Backend::Float;
    res.scan = std::move(scan);
    return res;
}

TrialEval lie_rank_trial(const ActionSpec& spec, int n, const SampleCfg& cfg, Backend backend) {
    return [&spec, n, cfg, backend](std::uint64_t trial)
               -> std::optional<std::pair<int, PointTuple>> {
        PointTuple tup = sample_tuple(spec, n, cfg, trial);
        try {
            JointMatrix mat = lie_matrix(spec, tup, backend);
            RankReport rep = matrix_rank(mat, cfg.tol);
            return std::make_pair(rep.rank, std::move(tup));
        } catch (const MatrixEvalError&) {
            return std::nullopt;
        }
    };
}

} // namespace

GenericRankResult generic_rank(const ActionSpec& spec, int n, const SampleCfg& cfg) {
    if (n < 1) throw SpecError("order must be >= 1");
    cfg.validate();
    const Backend backend = scan_backend(spec, cfg);
    const int upper = std::min(spec.r(), n * spec.m);
    ScanOutcome scan = scan_max_rank(lie_rank_trial(spec, n, cfg, backend), 0, cfg.trials, upper);
    return from_scan(spec, backend, std::move(scan));
}

GenericRankResult generic_rank_confident(const ActionSpec& spec, int n, const SampleCfg& cfg,
                                         int min_attain, int max_batches, bool* confident) {
    if (n < 1) throw SpecError("order must be >= 1");
    cfg.validate();
    const Backend backend = scan_backend(spec, cfg);
    const int upper = std::min(spec.r(), n * spec.m);
    TrialEval eval = lie_rank_trial(spec, n, cfg, backend);
    ScanOutcome scan = scan_max_rank(eval, 0, cfg.trials, upper);
    std::uint64_t next_first = static_cast<std::uint64_t>(cfg.trials);
    int batches = 0;
    while (!scan.saturated && scan.max_rank >= 0 && scan.attain_count < min_attain &&
           batches < max_batches) {
        ScanOutcome more = scan_max_rank(eval, next_first, cfg.trials, upper);
        merge_scan(scan, more);
        next_first += static_cast<std::uint64_t>(cfg.trials);
        ++batches;
    }
    if (confident)
        *confident = scan.saturated || scan.attain_count >= min_attain;
    return from_scan(spec, backend, std::move(scan));
}

} // namespace jointorbit
