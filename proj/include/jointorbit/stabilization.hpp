#pragma once

#include "jointorbit/rank_scan.hpp"

#include <string>
#include <vector>

namespace jointorbit {

/// Orbit-dimension sequence of the Cartesian action, stabilization order,
/// and joint-invariant counts.
struct StabilizationReport {
    std::vector<int> s;                // s_1 .. s_{n0}
    int n0 = 0;
    int s_stab = 0;
    std::vector<int> invariant_counts; // n*m - s_n for n = 1 .. n0
    bool bound_ok = false;             // n0 <= r - s_1 + 1
    enum class Verdict { Yes, No, Heuristic } verdict = Verdict::Heuristic;
    std::vector<PointTuple> witnesses; // per order 1 .. n0
    Backend backend = Backend::Float;
    std::vector<int> s_extended;       // every order actually computed (>= n0 + 1 entries)
    std::vector<std::string> warnings;
};

const char* verdict_name(StabilizationReport::Verdict v);

/// Computes s_n for n = 1, 2, ... and stops at the first n with
/// s_n == s_{n+1}; equality at consecutive orders cannot be a
/// pseudo-stabilization, so that n is the stabilization order. Growing past
/// n = r - s_1 + 1 is impossible for correct ranks and raises NumericError.
/// `extra_orders` additionally computes s up to n0 + 1 + extra_orders
/// (test mode for the no-pseudo-stabilization property).
StabilizationReport stabilize(const ActionSpec& spec, const SampleCfg& cfg, int extra_orders = 0);

/// n*m - s_n: the count of functionally independent local joint invariants
/// on n copies of the chart.
int invariant_count(const ActionSpec& spec, int n, const SampleCfg& cfg);

/// True iff the orbit through the tuple has the maximal dimension s_n.
bool is_max_orbit(const ActionSpec& spec, const PointTuple& tuple, const SampleCfg& cfg);

/// Extends a single base point to an (n0 + 1)-tuple whose orbit dimension is
/// the stabilization dimension; every base point admits such a completion.
/// The returned tuple is rank-checked before returning; running out of
/// retries raises NumericError (a budget failure, never a counterexample).
PointTuple complete_tuple(const ActionSpec& spec, const PointTuple& base, const SampleCfg& cfg,
                          const StabilizationReport* pre = nullptr);

} // namespace jointorbit
