#pragma once

#include "jointorbit/rank_scan.hpp"

#include <string>
#include <vector>

namespace jointorbit {

struct IndependenceReport {
    Region region;
    int r = 0, q = 0, p = 0;
    int max_wronskian_rank = 0;
    enum class Verdict { Independent, DependentOnRegion, HeuristicDependent } verdict;
    // A certified constant-coefficient relation sum_k c_k f_k == 0 on the
    // region; empty when independent or when extraction failed. Exact mode
    // reports integerized entries with a positive leading coefficient.
    std::vector<Rational> relation_exact;
    std::vector<double> relation; // float form (always filled when a relation is reported)
    PointTuple witness;
    Backend backend = Backend::Float;
    std::vector<std::string> warnings;
};

const char* verdict_name(IndependenceReport::Verdict v);

/// Linear independence on a region via the multi-point Wronskian: sampled
/// (r+1)-point tuples certify independence as soon as one reaches rank r.
/// When the rank stays below r in exact-polynomial mode, a constant null
/// vector of the stacked evaluations is extracted and re-verified at 100
/// fresh points (exactly in exact mode, residual < 1e-10 otherwise).
IndependenceReport independence_on_region(const FunctionFamily& fam, const Region& region,
                                          const SampleCfg& cfg);

/// The r-parameter translation action on X x R^q with generators
/// v_k = sum_l f_k^l(x) d/dv^l. Joint Lie matrix ranks of this action match
/// the multi-point Wronskian ranks of the family at the same base points,
/// whatever the fiber values. Fresh fiber names are auto-renamed on
/// collision with a warning.
ActionSpec induced_action_oracle(const FunctionFamily& fam,
                                 std::vector<std::string>* warnings = nullptr);

} // namespace jointorbit
