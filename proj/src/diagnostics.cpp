#include "jointorbit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jointorbit {

const char* verdict_name(EffectivenessReport::Verdict v) {
    switch (v) {
        case EffectivenessReport::Verdict::Effective: return "effective";
        case EffectivenessReport::Verdict::NotEffective: return "not_effective";
        case EffectivenessReport::Verdict::HeuristicNotEffective: return "heuristic_not_effective";
    }
    return "?";
}

EffectivenessReport effectiveness_on_region(const ActionSpec& spec, const Region& region,
                                            const SampleCfg& cfg) {
    cfg.validate();
    if (region.dim() != spec.m)
        throw SpecError("region dimension " + std::to_string(region.dim()) +
                        " does not match chart dimension " + std::to_string(spec.m));
    const int r = spec.r();
    const int n = r + 1; // rank r is reachable with r+1 points whenever it is reachable at all
    const bool exact = cfg.exact.value_or(spec.polynomial) && spec.polynomial;
    if (cfg.exact.value_or(false) && !spec.polynomial)
        throw BackendError("exact backend requires polynomial generators");
    const Backend backend = exact ? Backend::Exact : Backend::Float;

    TrialEval eval = [&spec, &region, &cfg, n, exact,
                      backend](std::uint64_t trial) -> std::optional<std::pair<int, PointTuple>> {
        PointTuple tup = sample_tuple_in(region, n, exact, cfg.seed, trial);
        try {
            RankReport rep = matrix_rank(lie_matrix(spec, tup, backend), cfg.tol);
            return std::make_pair(rep.rank, std::move(tup));
        } catch (const MatrixEvalError&) {
            return std::nullopt;
        }
    };
    ScanOutcome scan = scan_max_rank(eval, 0, cfg.trials, r);
    if (scan.max_rank < 0)
        throw NumericError("every sampled tuple hit an evaluation domain error on this region");

    EffectivenessReport rep;
    rep.region = region;
    rep.max_rank_found = scan.max_rank;
    rep.required = r;
    rep.witness = scan.witness;
    rep.trials_used = scan.trials_run;
    rep.backend = backend;
    if (scan.max_rank == r)
        rep.verdict = EffectivenessReport::Verdict::Effective;
    else if (backend == Backend::Exact)
        rep.verdict = EffectivenessReport::Verdict::NotEffective;
    else
        rep.verdict = EffectivenessReport::Verdict::HeuristicNotEffective;
    return rep;
}

// --------------------------------------------------------------------------
// flows

namespace {

constexpr double kChartBound = 1e6;

struct FieldEval {
    const ActionSpec& spec;
    const std::vector<double>& a;

    void operator()(const std::vector<double>& z, std::vector<double>& out) const {
        const int m = spec.m;
        out.assign(static_cast<std::size_t>(m), 0.0);
        for (int k = 0; k < spec.r(); ++k) {
            const double ak = a[static_cast<std::size_t>(k)];
            if (ak == 0.0) continue;
            for (int i = 0; i < m; ++i)
                out[static_cast<std::size_t>(i)] +=
                    ak * spec.generators[static_cast<std::size_t>(k)]
                             .coeff[static_cast<std::size_t>(i)]
                             .eval(z);
        }
    }
};

bool inside_chart(const std::vector<double>& z) {
    for (double v : z)
        if (!std::isfinite(v) || std::fabs(v) > kChartBound) return false;
    return true;
}

} // namespace

std::vector<double> flow(const ActionSpec& spec, const FlowSpec& fs, const std::vector<double>& z) {
    if (static_cast<int>(fs.coeffs.size()) != spec.r())
        throw SpecError("flow coefficients must have " + std::to_string(spec.r()) + " entries");
    if (fs.steps < 1) throw SpecError("flow steps must be >= 1");
    if (static_cast<int>(z.size()) != spec.m)
        throw SpecError("flow start point must have dimension " + std::to_string(spec.m));

    const FieldEval field{spec, fs.coeffs};
    const double h = fs.time / fs.steps;
    const int m = spec.m;
    std::vector<double> cur = z, k1, k2, k3, k4, tmp(static_cast<std::size_t>(m)),
                                incr(static_cast<std::size_t>(m));
    for (long step = 0; step < fs.steps; ++step) {
        try {
            field(cur, k1);
            for (int i = 0; i < m; ++i) tmp[i] = cur[i] + 0.5 * h * k1[i];
            field(tmp, k2);
            for (int i = 0; i < m; ++i) tmp[i] = cur[i] + 0.5 * h * k2[i];
            field(tmp, k3);
            for (int i = 0; i < m; ++i) tmp[i] = cur[i] + h * k3[i];
            field(tmp, k4);
        } catch (const EvalError& e) {
            throw FlowError(std::string("trajectory left the domain: ") + e.what(), step);
        }
        for (int i = 0; i < m; ++i) {
            incr[i] = (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) / 6.0;
            cur[i] += h * incr[i];
        }
        if (!inside_chart(cur)) throw FlowError("trajectory left the chart", step);
    }
    return cur;
}

// --------------------------------------------------------------------------
// rank stratum invariance

namespace {

// coefficient vector with norm in (0.1, 0.5]; small flows near the identity
std::vector<double> sample_flow_coeffs(int r, std::uint64_t seed, std::uint64_t trial) {
    TrialRng rng(seed, trial, kSaltFlow);
    std::vector<double> a(static_cast<std::size_t>(r));
    double norm2 = 0.0;
    for (auto& v : a) {
        v = rng.uniform(-1.0, 1.0);
        norm2 += v * v;
    }
    double norm = std::sqrt(norm2);
    if (norm == 0.0) norm = 1.0;
    const double target = 0.1 + 0.4 * rng.unit();
    for (auto& v : a) v *= target / norm;
    return a;
}

std::optional<PointTuple> flow_tuple(const ActionSpec& spec, const FlowSpec& fs,
                                     const PointTuple& tup) {
    PointTuple out;
    out.pts.reserve(tup.pts.size());
    for (const auto& z : tup.pts) {
        try {
            out.pts.push_back(flow(spec, fs, z));
        } catch (const FlowError&) {
            return std::nullopt;
        }
    }
    return out;
}

} // namespace

InvarianceReport check_rank_invariance(const ActionSpec& spec, int n, const SampleCfg& cfg,
                                       int flows) {
    cfg.validate();
    if (n < 1) throw SpecError("order must be >= 1");
    if (flows < 1) throw SpecError("flow count must be >= 1");
    const double relaxed_tol = 1e-6; // integration error pollutes singular values

    InvarianceReport rep;
    rep.order = n;
    rep.tuples = cfg.trials;
    rep.flows_per_tuple = flows;
    rep.tol = relaxed_tol;

    long long checked = 0, skipped = 0, mismatches = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : checked, skipped, mismatches)
#endif
    for (long long t = 0; t < cfg.trials; ++t) {
        PointTuple tup = sample_tuple(spec, n, cfg, static_cast<std::uint64_t>(t));
        int before = -1;
        try {
            before = numeric_rank(lie_matrix(spec, tup, Backend::Float), relaxed_tol).rank;
        } catch (const MatrixEvalError&) {
            skipped += flows;
            continue;
        } catch (const NumericError&) {
            skipped += flows;
            continue;
        }
        for (int f = 0; f < flows; ++f) {
            FlowSpec fs;
            fs.coeffs = sample_flow_coeffs(spec.r(), cfg.seed,
                                           static_cast<std::uint64_t>(t) * 1000003ull +
                                               static_cast<std::uint64_t>(f));
            fs.time = 1.0;
            fs.steps = 1024;
            auto moved = flow_tuple(spec, fs, tup);
            if (!moved) {
                ++skipped;
                continue;
            }
            try {
                int after = numeric_rank(lie_matrix(spec, *moved, Backend::Float), relaxed_tol).rank;
                ++checked;
                if (after != before) ++mismatches;
            } catch (const MatrixEvalError&) {
                ++skipped;
            } catch (const NumericError&) {
                ++skipped;
            }
        }
    }
    rep.cases_checked = checked;
    rep.cases_skipped = skipped;
    rep.mismatches = mismatches;
    rep.pass = mismatches == 0 && checked > 0;
    rep.witness = sample_tuple(spec, n, cfg, 0);
    return rep;
}

// --------------------------------------------------------------------------
// Lie determinant

LieDeterminant lie_determinant(const ActionSpec& spec, const PointTuple& tuple,
                               const SampleCfg& cfg) {
    cfg.validate();
    const int n = tuple.order();
    if (spec.r() != n * spec.m)
        throw SpecError("Lie determinant needs a square matrix: r = " + std::to_string(spec.r()) +
                        " but n*m = " + std::to_string(n * spec.m));
    Backend backend = choose_backend(spec.polynomial, tuple.has_exact(), cfg.exact);
    JointMatrix mat = lie_matrix(spec, tuple, backend);
    LieDeterminant out;
    out.order = n;
    out.backend = backend;
    if (backend == Backend::Exact) {
        out.exact = det_exact(mat);
        out.value = out.exact->to_double();
    } else {
        out.value = det_float(mat);
    }
    return out;
}

DetInvarianceReport check_det_invariance(const ActionSpec& spec, const SampleCfg& cfg) {
    cfg.validate();
    DetInvarianceReport rep;
    if (spec.r() % spec.m != 0 || spec.r() / spec.m < 1) {
        rep.applicable = false;
        rep.skip_reason = "no order n with r = n*m (r = " + std::to_string(spec.r()) +
                          ", m = " + std::to_string(spec.m) + ")";
        return rep;
    }
    const int n = spec.r() / spec.m;
    rep.applicable = true;
    rep.order = n;
    if (n < 2) {
        rep.skip_reason = "square at order 1: the diagonal variety is empty, generic part only";
    }
    const int flows = 10;
    const Region box = cfg.box_for(spec.m);
    double max_on_variety = 0.0;
    double max_rel_change = 0.0;
    double min_abs_generic = std::numeric_limits<double>::infinity();
    long long variety_cases = 0, generic_cases = 0, skipped = 0;

    SampleCfg float_cfg = cfg;
    float_cfg.exact = false; // flowed points are floats

    for (long long t = 0; t < cfg.trials; ++t) {
        // diagonal tuple (z, ..., z): always on the zero variety, and the
        // simultaneous action keeps it diagonal
        if (n >= 2) {
            PointTuple one = sample_tuple_in(box, 1, false, cfg.seed,
                                             static_cast<std::uint64_t>(t));
            PointTuple diag;
            diag.pts.assign(static_cast<std::size_t>(n), one.pts[0]);
            for (int f = 0; f < flows; ++f) {
                FlowSpec fs;
                fs.coeffs = sample_flow_coeffs(spec.r(), cfg.seed,
                                               0xd1a60000ull + static_cast<std::uint64_t>(t) *
                                                                   1000003ull +
                                                   static_cast<std::uint64_t>(f));
                auto moved = flow_tuple(spec, fs, diag);
                if (!moved) {
                    ++skipped;
                    continue;
                }
                try {
                    double d = lie_determinant(spec, *moved, float_cfg).value;
                    max_on_variety = std::max(max_on_variety, std::fabs(d));
                    ++variety_cases;
                } catch (const MatrixEvalError&) {
                    ++skipped;
                }
            }
        }
        // generic tuple: determinant stays away from zero and moves by a
        // bounded factor under small flows
        PointTuple gen = sample_tuple_in(box, n, false, cfg.seed,
                                         0x6e0a11c0ull + static_cast<std::uint64_t>(t));
        try {
            double before = lie_determinant(spec, gen, float_cfg).value;
            min_abs_generic = std::min(min_abs_generic, std::fabs(before));
            for (int f = 0; f < flows; ++f) {
                FlowSpec fs;
                fs.coeffs = sample_flow_coeffs(spec.r(), cfg.seed,
                                               0x6e5e11cull + static_cast<std::uint64_t>(t) *
                                                                  1000003ull +
                                                   static_cast<std::uint64_t>(f));
                auto moved = flow_tuple(spec, fs, gen);
                if (!moved) {
                    ++skipped;
                    continue;
                }
                double after = lie_determinant(spec, *moved, float_cfg).value;
                min_abs_generic = std::min(min_abs_generic, std::fabs(after));
                if (before != 0.0)
                    max_rel_change = std::max(
                        max_rel_change, std::max(std::fabs(after / before),
                                                 std::fabs(before / (after == 0.0 ? 1e-300 : after))));
                ++generic_cases;
            }
        } catch (const MatrixEvalError&) {
            ++skipped;
        }
    }
    rep.variety_cases = variety_cases;
    rep.generic_cases = generic_cases;
    rep.skipped = skipped;
    rep.max_abs_on_variety = max_on_variety;
    rep.max_rel_change_generic = max_rel_change;
    rep.min_abs_generic = generic_cases ? min_abs_generic : 0.0;
    rep.pass = (n < 2 || (variety_cases > 0 && max_on_variety <= 1e-8)) && generic_cases > 0 &&
               max_rel_change < 10.0;
    return rep;
}

FreenessReport local_freeness_check(const ActionSpec& spec, const PointTuple& tuple,
                                    const SampleCfg& cfg) {
    cfg.validate();
    Backend backend = choose_backend(spec.polynomial, tuple.has_exact(), cfg.exact);
    RankReport rank = matrix_rank(lie_matrix(spec, tuple, backend), cfg.tol);
    FreenessReport rep;
    rep.rank = rank.rank;
    rep.required = spec.r();
    if (rank.rank == spec.r()) {
        rep.verdict = FreenessReport::Verdict::LocallyFree;
        rep.caveat = "local freeness only: discrete isotropy is invisible to infinitesimal "
                     "data, so global freeness may still fail";
    } else {
        rep.verdict = FreenessReport::Verdict::NotLocallyFreeHere;
    }
    return rep;
}

} // namespace jointorbit
