#include "jointorbit/independence.hpp"

#include <algorithm>
#include <cmath>

namespace jointorbit {

const char* verdict_name(IndependenceReport::Verdict v) {
    switch (v) {
        case IndependenceReport::Verdict::Independent: return "independent";
        case IndependenceReport::Verdict::DependentOnRegion: return "dependent_on_region";
        case IndependenceReport::Verdict::HeuristicDependent: return "heuristic_dependent";
    }
    return "?";
}

namespace {

// Stacked evaluations at K points: rows (j, l) -> f_k^l(x_j), columns k.
// A null vector c of this matrix is a candidate relation sum c_k f_k == 0.
void stack_evaluations(const FunctionFamily& fam, const PointTuple& tup, bool exact,
                       std::vector<Rational>* out_q, std::vector<double>* out_f) {
    const int r = fam.r();
    const int rows = tup.order() * fam.q;
    if (out_q) out_q->assign(static_cast<std::size_t>(rows * r), Rational(0));
    if (out_f) out_f->assign(static_cast<std::size_t>(rows * r), 0.0);
    for (int j = 0; j < tup.order(); ++j) {
        for (int l = 0; l < fam.q; ++l) {
            const int row = j * fam.q + l;
            for (int k = 0; k < r; ++k) {
                const Expr& e = fam.functions[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                if (exact) {
                    Rational v = e.eval_exact((*tup.exact)[static_cast<std::size_t>(j)]);
                    if (out_f) (*out_f)[static_cast<std::size_t>(row * r + k)] = v.to_double();
                    (*out_q)[static_cast<std::size_t>(row * r + k)] = std::move(v);
                } else {
                    (*out_f)[static_cast<std::size_t>(row * r + k)] =
                        e.eval(tup.pts[static_cast<std::size_t>(j)]);
                }
            }
        }
    }
}

// lcm of denominators over gcd of numerators, leading entry positive
std::vector<Rational> integerize_relation(const std::vector<Rational>& c) {
    BigInt den(1), num(0);
    for (const auto& v : c) {
        den = lcm(den, v.den());
        num = gcd(num, v.num());
    }
    if (num.is_zero()) num = BigInt(1);
    std::vector<Rational> out;
    out.reserve(c.size());
    Rational scale(den, num);
    for (const auto& v : c) out.push_back(v * scale);
    for (const auto& v : out) {
        if (v.is_zero()) continue;
        if (v.sign() < 0)
            for (auto& w : out) w = -w;
        break;
    }
    return out;
}

// residual of the relation at fresh sample points; exact mode returns 0/1
bool verify_relation(const FunctionFamily& fam, const Region& region, const SampleCfg& cfg,
                     const std::vector<Rational>* cq, const std::vector<double>& cf,
                     bool exact) {
    const int fresh = 100;
    for (int t = 0; t < fresh; ++t) {
        PointTuple pt = sample_tuple_in(region, 1, exact, cfg.seed,
                                        static_cast<std::uint64_t>(t), kSaltVerify);
        for (int l = 0; l < fam.q; ++l) {
            if (exact) {
                Rational acc(0);
                for (int k = 0; k < fam.r(); ++k)
                    acc += (*cq)[static_cast<std::size_t>(k)] *
                           fam.functions[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]
                               .eval_exact((*pt.exact)[0]);
                if (!acc.is_zero()) return false;
            } else {
                double acc = 0.0;
                for (int k = 0; k < fam.r(); ++k)
                    acc += cf[static_cast<std::size_t>(k)] *
                           fam.functions[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]
                               .eval(pt.pts[0]);
                if (std::fabs(acc) >= 1e-10) return false;
            }
        }
    }
    return true;
}

} // namespace

IndependenceReport independence_on_region(const FunctionFamily& fam, const Region& region,
                                          const SampleCfg& cfg) {
    cfg.validate();
    if (region.dim() != fam.p)
        throw SpecError("region dimension " + std::to_string(region.dim()) +
                        " does not match the family domain dimension " + std::to_string(fam.p));
    const int r = fam.r();
    const int n = r + 1;
    const bool exact = cfg.exact.value_or(fam.polynomial) && fam.polynomial;
    if (cfg.exact.value_or(false) && !fam.polynomial)
        throw BackendError("exact backend requires polynomial functions");
    const Backend backend = exact ? Backend::Exact : Backend::Float;

    TrialEval eval = [&fam, &region, &cfg, n, exact,
                      backend](std::uint64_t trial) -> std::optional<std::pair<int, PointTuple>> {
        PointTuple tup = sample_tuple_in(region, n, exact, cfg.seed, trial);
        try {
            RankReport rep = matrix_rank(wronskian_matrix(fam, tup, backend), cfg.tol);
            return std::make_pair(rep.rank, std::move(tup));
        } catch (const MatrixEvalError&) {
            return std::nullopt;
        }
    };
    ScanOutcome scan = scan_max_rank(eval, 0, cfg.trials, r);
    if (scan.max_rank < 0)
        throw NumericError("every sampled tuple hit an evaluation domain error on this region");

    IndependenceReport rep;
    rep.region = region;
    rep.r = r;
    rep.q = fam.q;
    rep.p = fam.p;
    rep.max_wronskian_rank = scan.max_rank;
    rep.witness = scan.witness;
    rep.backend = backend;

    if (scan.max_rank == r) {
        rep.verdict = IndependenceReport::Verdict::Independent;
        return rep;
    }

    // rank-deficient: extract a relation from the stacked evaluations at
    // (max rank + 1) fresh generic points, then re-verify it independently
    const int kpoints = scan.max_rank + 1;
    PointTuple stackpts =
        sample_tuple_in(region, kpoints, exact, cfg.seed, 0x51ac4ed0ull, kSaltFiber);
    const int rows = kpoints * fam.q;
    if (exact) {
        std::vector<Rational> eq;
        stack_evaluations(fam, stackpts, true, &eq, nullptr);
        auto basis = exact_nullspace(eq, rows, r);
        if (!basis.empty()) {
            std::vector<Rational> c = integerize_relation(basis.front());
            std::vector<double> cf;
            for (const auto& v : c) cf.push_back(v.to_double());
            if (verify_relation(fam, region, cfg, &c, cf, true)) {
                rep.relation_exact = std::move(c);
                rep.relation = std::move(cf);
            } else {
                rep.warnings.push_back("extracted relation failed exact re-verification");
            }
        } else {
            rep.warnings.push_back("rank-deficient scan but full-rank evaluation stack; "
                                   "relation not certified");
        }
        rep.verdict = IndependenceReport::Verdict::DependentOnRegion;
        return rep;
    }

    std::vector<double> ef;
    stack_evaluations(fam, stackpts, false, nullptr, &ef);
    std::vector<double> c = float_null_vector(ef, rows, r, 1e-7);
    if (!c.empty()) {
        // unit norm, leading significant entry positive
        double norm = 0.0, amax = 0.0;
        for (double v : c) {
            norm += v * v;
            amax = std::max(amax, std::fabs(v));
        }
        norm = std::sqrt(norm);
        for (auto& v : c) v /= norm;
        for (double v : c) {
            if (std::fabs(v) < 1e-9 * std::max(1.0, amax)) continue;
            if (v < 0)
                for (auto& w : c) w = -w;
            break;
        }
        if (verify_relation(fam, region, cfg, nullptr, c, false))
            rep.relation = std::move(c);
        else
            rep.warnings.push_back("candidate relation failed residual re-verification");
    }
    rep.verdict = IndependenceReport::Verdict::HeuristicDependent;
    return rep;
}

ActionSpec induced_action_oracle(const FunctionFamily& fam, std::vector<std::string>* warnings) {
    // fiber names: first base in {v, w, u, fib} with no collision against the
    // base coordinates
    std::string base;
    for (const char* cand : {"v", "w", "u", "fib"}) {
        bool clash = false;
        for (int l = 1; l <= fam.q; ++l) {
            std::string name = std::string(cand) + std::to_string(l);
            for (const auto& xc : fam.xcoords)
                if (xc == name) clash = true;
        }
        if (!clash) {
            base = cand;
            break;
        }
    }
    if (base.empty()) throw SpecError("could not find collision-free fiber coordinate names");
    if (base != "v" && warnings)
        warnings->push_back("fiber coordinates renamed to " + base + "1.. to avoid collision");

    ActionSpec spec;
    spec.name = fam.name + "-induced";
    spec.m = fam.p + fam.q;
    spec.coords = fam.xcoords;
    for (int l = 1; l <= fam.q; ++l) spec.coords.push_back(base + std::to_string(l));
    for (int k = 0; k < fam.r(); ++k) {
        VectorField vf;
        for (int i = 0; i < fam.p; ++i)
            vf.coeff.push_back(Expr::parse("0", spec.coords));
        for (int l = 0; l < fam.q; ++l)
            vf.coeff.push_back(Expr::parse(
                fam.functions[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)].source(),
                spec.coords));
        spec.generators.push_back(std::move(vf));
    }
    spec.polynomial = fam.polynomial;
    spec.analytic_hint = false;
    return spec;
}

} // namespace jointorbit
