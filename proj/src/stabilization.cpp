#include "jointorbit/stabilization.hpp"

namespace jointorbit {

const char* verdict_name(StabilizationReport::Verdict v) {
    switch (v) {
        case StabilizationReport::Verdict::Yes: return "yes";
        case StabilizationReport::Verdict::No: return "no";
        case StabilizationReport::Verdict::Heuristic: return "heuristic";
    }
    return "?";
}

namespace {

// Stopping decisions require the max to be witnessed at least twice (or to
// saturate min(r, n*m)); a single lucky tuple must not truncate the sequence.
constexpr int kMinAttain = 2;
constexpr int kMaxExtraBatches = 4;

GenericRankResult order_rank(const ActionSpec& spec, int n, const SampleCfg& cfg,
                             std::vector<std::string>& warnings) {
    bool confident = false;
    GenericRankResult res =
        generic_rank_confident(spec, n, cfg, kMinAttain, kMaxExtraBatches, &confident);
    if (!confident)
        warnings.push_back("rank " + std::to_string(res.rank) + " at order " + std::to_string(n) +
                           " witnessed only once despite extended sampling");
    return res;
}

} // namespace

StabilizationReport stabilize(const ActionSpec& spec, const SampleCfg& cfg, int extra_orders) {
    cfg.validate();
    StabilizationReport rep;

    GenericRankResult first = order_rank(spec, 1, cfg, rep.warnings);
    rep.backend = first.backend;
    rep.s_extended.push_back(first.rank);
    std::vector<PointTuple> witnesses{first.witness};

    const int cap = spec.r() - first.rank + 1;
    int n0 = -1;
    for (int n = 1;; ++n) {
        if (n > cap)
            throw NumericError("stabilization did not occur by order " + std::to_string(cap) +
                               " = r - s_1 + 1; rank estimates are inconsistent");
        GenericRankResult next = order_rank(spec, n + 1, cfg, rep.warnings);
        if (next.rank < rep.s_extended.back())
            throw NumericError("orbit dimension estimate dropped from order " +
                               std::to_string(n) + " to " + std::to_string(n + 1) +
                               "; rank estimates are inconsistent");
        rep.s_extended.push_back(next.rank);
        if (next.rank == rep.s_extended[static_cast<std::size_t>(n - 1)]) {
            n0 = n;
            break;
        }
        witnesses.push_back(next.witness);
    }

    rep.n0 = n0;
    rep.s.assign(rep.s_extended.begin(), rep.s_extended.begin() + n0);
    rep.s_stab = rep.s.back();
    rep.witnesses = std::move(witnesses);
    for (int n = 1; n <= n0; ++n)
        rep.invariant_counts.push_back(n * spec.m - rep.s[static_cast<std::size_t>(n - 1)]);
    rep.bound_ok = n0 <= cap;

    const bool certifiable = spec.polynomial || spec.analytic_hint;
    if (!certifiable)
        rep.verdict = StabilizationReport::Verdict::Heuristic;
    else
        rep.verdict = rep.s_stab == spec.r() ? StabilizationReport::Verdict::Yes
                                             : StabilizationReport::Verdict::No;

    for (int extra = 0; extra < extra_orders; ++extra) {
        int n = n0 + 2 + extra;
        GenericRankResult more = order_rank(spec, n, cfg, rep.warnings);
        rep.s_extended.push_back(more.rank);
    }
    return rep;
}

int invariant_count(const ActionSpec& spec, int n, const SampleCfg& cfg) {
    return n * spec.m - generic_rank(spec, n, cfg).rank;
}

bool is_max_orbit(const ActionSpec& spec, const PointTuple& tuple, const SampleCfg& cfg) {
    cfg.validate();
    const int n = tuple.order();
    if (n < 1) throw SpecError("tuple must hold at least one point");
    const int sn = generic_rank(spec, n, cfg).rank;
    Backend backend = choose_backend(spec.polynomial, tuple.has_exact(), cfg.exact);
    RankReport rep = matrix_rank(lie_matrix(spec, tuple, backend), cfg.tol);
    return rep.rank == sn;
}

PointTuple complete_tuple(const ActionSpec& spec, const PointTuple& base, const SampleCfg& cfg,
                          const StabilizationReport* pre) {
    cfg.validate();
    if (base.order() != 1 || base.dim() != spec.m)
        throw SpecError("completion expects a single base point of the chart dimension");
    StabilizationReport local;
    if (!pre) {
        local = stabilize(spec, cfg);
        pre = &local;
    }
    const int extension = pre->n0; // total order n0 + 1 including the base point
    const bool want_exact =
        spec.polynomial && base.has_exact() && cfg.exact.value_or(true);
    if (cfg.exact.value_or(false) && !base.has_exact())
        throw BackendError("exact completion requires a rational base point");
    const Region box = cfg.box_for(spec.m);
    const Backend backend = want_exact ? Backend::Exact : Backend::Float;

    for (long long attempt = 0; attempt < cfg.trials; ++attempt) {
        PointTuple ext = sample_tuple_in(box, extension, want_exact, cfg.seed,
                                         static_cast<std::uint64_t>(attempt), kSaltComplete);
        PointTuple cand;
        cand.pts = base.pts;
        cand.pts.insert(cand.pts.end(), ext.pts.begin(), ext.pts.end());
        if (want_exact) {
            cand.exact = *base.exact;
            cand.exact->insert(cand.exact->end(), ext.exact->begin(), ext.exact->end());
        }
        try {
            RankReport rep = matrix_rank(lie_matrix(spec, cand, backend), cfg.tol);
            if (rep.rank == pre->s_stab) return cand;
        } catch (const MatrixEvalError&) {
            continue;
        }
    }
    throw NumericError("tuple completion budget exhausted after " + std::to_string(cfg.trials) +
                       " attempts (heuristic failure, not a counterexample)");
}

} // namespace jointorbit
