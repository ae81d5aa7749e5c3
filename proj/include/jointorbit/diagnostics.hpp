#pragma once

#include "jointorbit/rank_scan.hpp"

#include <string>
#include <vector>

namespace jointorbit {

struct EffectivenessReport {
    Region region;
    int max_rank_found = 0;
    int required = 0; // r
    enum class Verdict { Effective, NotEffective, HeuristicNotEffective } verdict;
    PointTuple witness;
    long long trials_used = 0;
    Backend backend = Backend::Float;
};

const char* verdict_name(EffectivenessReport::Verdict v);

/// Samples (r+1)-point tuples inside the region; "effective" is certified by
/// a witness of rank r. Failing to reach r is a certificate only on the
/// exact-polynomial path (generic rank deficiency on a box pins down a
/// linear relation); otherwise the negative verdict is heuristic.
EffectivenessReport effectiveness_on_region(const ActionSpec& spec, const Region& region,
                                            const SampleCfg& cfg);

/// A group element near the identity: the time-`time` flow of the Lie
/// algebra element with the given coefficients in the generator basis.
struct FlowSpec {
    std::vector<double> coeffs; // r entries
    double time = 1.0;
    int steps = 1024;           // classical 4th-order integration, fixed step;
                                // global error is O(steps^-4)
};

/// Integrates z' = sum_k a_k v_k(z). Throws FlowError (with the step index)
/// when the trajectory leaves the chart: an evaluation domain error, a
/// non-finite value, or |coordinate| beyond the chart bound.
std::vector<double> flow(const ActionSpec& spec, const FlowSpec& fs,
                         const std::vector<double>& z);

struct InvarianceReport {
    int order = 0;
    long long tuples = 0;
    long long flows_per_tuple = 0;
    long long cases_checked = 0;
    long long cases_skipped = 0; // trajectory left the chart; logged, not failed
    long long mismatches = 0;
    double tol = 1e-6;
    bool pass = false;
    PointTuple witness; // first checked tuple
};

/// Applies the same sampled group element to every point of sampled tuples
/// and verifies the joint Lie matrix rank is unchanged (at a relaxed
/// tolerance absorbing integration error).
InvarianceReport check_rank_invariance(const ActionSpec& spec, int n, const SampleCfg& cfg,
                                       int flows);

struct LieDeterminant {
    int order = 0; // n with r = n*m
    double value = 0.0;
    std::optional<Rational> exact;
    Backend backend = Backend::Float;
};

/// Determinant of the square joint Lie matrix; requires r = n*m for the
/// tuple's order n (SpecError otherwise).
LieDeterminant lie_determinant(const ActionSpec& spec, const PointTuple& tuple,
                               const SampleCfg& cfg);

struct DetInvarianceReport {
    bool applicable = false;   // some n has r = n*m
    std::string skip_reason;
    int order = 0;
    long long variety_cases = 0;  // diagonal tuples x flows with |det| small
    long long generic_cases = 0;
    long long skipped = 0;
    double max_abs_on_variety = 0.0;    // should stay <= 1e-8
    double max_rel_change_generic = 0.0; // numerical sanity only, not the claim
    double min_abs_generic = 0.0;
    bool pass = false;
};

/// Zero-set preservation of the Lie determinant: diagonal tuples stay on
/// det = 0 under sampled flows. The off-variety bound (relative change
/// under 10x) is a numerical sanity check, not the invariance claim.
DetInvarianceReport check_det_invariance(const ActionSpec& spec, const SampleCfg& cfg);

struct FreenessReport {
    enum class Verdict { LocallyFree, NotLocallyFreeHere } verdict;
    int rank = 0;
    int required = 0; // r
    std::string caveat;
};

/// Locally free at the tuple iff the generators span an r-dimensional space
/// there (zero-dimensional isotropy). Freeness proper is not decidable from
/// infinitesimal data and is never claimed.
FreenessReport local_freeness_check(const ActionSpec& spec, const PointTuple& tuple,
                                    const SampleCfg& cfg);

} // namespace jointorbit
