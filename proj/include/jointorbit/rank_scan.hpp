#pragma once

#include "jointorbit/rank.hpp"

#include <functional>
#include <optional>

namespace jointorbit {

/// One sampling trial: returns the achieved rank and the tuple that achieved
/// it, or nullopt when evaluation hit a domain error for that tuple.
using TrialEval = std::function<std::optional<std::pair<int, PointTuple>>(std::uint64_t trial)>;

/// Result of a max-rank scan over sampled trials.
///
/// The contract is exact sequential semantics: trials are conceptually
/// processed in index order, the witness is the attaining tuple with the
/// lowest trial index, attain_count counts trials (among those processed)
/// that reached max_rank, and the scan stops right after the first trial
/// that saturates upper_bound. The parallel kernel reproduces this
/// bit-for-bit; it only evaluates trials in blocks and discards results past
/// the stopping point.
struct ScanOutcome {
    int max_rank = -1;            // -1 when every trial failed
    long long witness_trial = -1;
    PointTuple witness;
    int attain_count = 0;
    long long trials_run = 0;
    long long failed_trials = 0;
    bool saturated = false;

    bool same_as(const ScanOutcome& o) const;
};

ScanOutcome scan_max_rank(const TrialEval& eval, std::uint64_t first_trial, long long trials,
                          int upper_bound);

/// Serial reference implementation; kept for testing and benchmarking.
ScanOutcome scan_max_rank_serial(const TrialEval& eval, std::uint64_t first_trial,
                                 long long trials, int upper_bound);

/// Merge b into a as if b's trials followed a's (used when a scan is
/// extended with more trials).
void merge_scan(ScanOutcome& a, const ScanOutcome& b);

// --------------------------------------------------------------------------

struct GenericRankResult {
    int rank = 0;
    PointTuple witness;
    Backend backend = Backend::Float;
    bool heuristic = false;   // float path: sampled max may under-approximate
    ScanOutcome scan;
};

/// Estimate of s_n, the maximal orbit dimension on n copies of the chart:
/// max over cfg.trials sampled tuples of the joint Lie matrix rank, with
/// early exit once min(r, n*m) is reached. Throws NumericError when every
/// trial fails.
GenericRankResult generic_rank(const ActionSpec& spec, int n, const SampleCfg& cfg);

/// Same, but keeps extending the scan (up to `max_batches` extra rounds of
/// cfg.trials) until the maximum is attained by at least `min_attain`
/// distinct tuples or saturates. Used by the stabilization stopping rule.
GenericRankResult generic_rank_confident(const ActionSpec& spec, int n, const SampleCfg& cfg,
                                         int min_attain, int max_batches,
                                         bool* confident = nullptr);

} // namespace jointorbit
