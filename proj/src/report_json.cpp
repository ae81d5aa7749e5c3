#include "jointorbit/report_json.hpp"

#include <cmath>

namespace jointorbit {

using nlohmann::json;

namespace {
json finite_or_inf(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}
} // namespace

json to_json(const Region& region) {
    json arr = json::array();
    for (const auto& iv : region.iv) arr.push_back(json::array({iv.lo, iv.hi}));
    return arr;
}

json to_json(const PointTuple& tuple) {
    json pts = json::array();
    if (tuple.has_exact()) {
        for (const auto& p : *tuple.exact) {
            json row = json::array();
            for (const auto& v : p) row.push_back(v.to_string());
            pts.push_back(row);
        }
    } else {
        for (const auto& p : tuple.pts) {
            json row = json::array();
            for (double v : p) row.push_back(v);
            pts.push_back(row);
        }
    }
    return pts;
}

json to_json(const RankReport& rep) {
    json j;
    j["rank"] = rep.rank;
    j["backend"] = backend_name(rep.backend);
    if (rep.backend == Backend::Float) {
        j["tol"] = rep.tol;
        j["spectrum"] = rep.spectrum;
    } else {
        j["pivots"] = rep.exact_pivots;
    }
    j["gap_ratio"] = finite_or_inf(rep.gap_ratio);
    return j;
}

json to_json(const ScanOutcome& scan) {
    json j;
    j["max_rank"] = scan.max_rank;
    j["witness_trial"] = scan.witness_trial;
    j["attain_count"] = scan.attain_count;
    j["trials_run"] = scan.trials_run;
    j["failed_trials"] = scan.failed_trials;
    j["saturated"] = scan.saturated;
    return j;
}

json to_json(const GenericRankResult& res) {
    json j;
    j["rank"] = res.rank;
    j["backend"] = backend_name(res.backend);
    j["heuristic"] = res.heuristic;
    j["witness"] = to_json(res.witness);
    j["scan"] = to_json(res.scan);
    return j;
}

json to_json(const StabilizationReport& rep) {
    json j;
    j["s"] = rep.s;
    j["n0"] = rep.n0;
    j["stabilization_dimension"] = rep.s_stab;
    j["invariant_counts"] = rep.invariant_counts;
    j["bound_ok"] = rep.bound_ok;
    j["effective_on_subsets"] = verdict_name(rep.verdict);
    j["backend"] = backend_name(rep.backend);
    j["s_extended"] = rep.s_extended;
    json wits = json::array();
    for (const auto& w : rep.witnesses) wits.push_back(to_json(w));
    j["witnesses"] = wits;
    return j;
}

json to_json(const EffectivenessReport& rep) {
    json j;
    j["region"] = to_json(rep.region);
    j["max_rank_found"] = rep.max_rank_found;
    j["required"] = rep.required;
    j["verdict"] = verdict_name(rep.verdict);
    j["witness"] = to_json(rep.witness);
    j["trials_used"] = rep.trials_used;
    j["backend"] = backend_name(rep.backend);
    return j;
}

json to_json(const InvarianceReport& rep) {
    json j;
    j["order"] = rep.order;
    j["tuples"] = rep.tuples;
    j["flows_per_tuple"] = rep.flows_per_tuple;
    j["cases_checked"] = rep.cases_checked;
    j["cases_skipped"] = rep.cases_skipped;
    j["mismatches"] = rep.mismatches;
    j["tol"] = rep.tol;
    j["pass"] = rep.pass;
    j["witness"] = to_json(rep.witness);
    return j;
}

json to_json(const LieDeterminant& det) {
    json j;
    j["order"] = det.order;
    j["backend"] = backend_name(det.backend);
    j["value"] = det.value;
    if (det.exact) j["exact"] = det.exact->to_string();
    return j;
}

json to_json(const DetInvarianceReport& rep) {
    json j;
    j["applicable"] = rep.applicable;
    if (!rep.skip_reason.empty()) j["skip_reason"] = rep.skip_reason;
    if (!rep.applicable) return j;
    j["order"] = rep.order;
    j["variety_cases"] = rep.variety_cases;
    j["generic_cases"] = rep.generic_cases;
    j["skipped"] = rep.skipped;
    j["max_abs_on_variety"] = rep.max_abs_on_variety;
    j["max_rel_change_generic"] = rep.max_rel_change_generic;
    j["min_abs_generic"] = rep.min_abs_generic;
    j["pass"] = rep.pass;
    return j;
}

json to_json(const FreenessReport& rep) {
    json j;
    j["verdict"] = rep.verdict == FreenessReport::Verdict::LocallyFree ? "locally_free"
                                                                       : "not_locally_free_here";
    j["rank"] = rep.rank;
    j["required"] = rep.required;
    if (!rep.caveat.empty()) j["caveat"] = rep.caveat;
    return j;
}

json to_json(const IndependenceReport& rep) {
    json j;
    j["region"] = to_json(rep.region);
    j["r"] = rep.r;
    j["q"] = rep.q;
    j["p"] = rep.p;
    j["max_wronskian_rank"] = rep.max_wronskian_rank;
    j["verdict"] = verdict_name(rep.verdict);
    j["backend"] = backend_name(rep.backend);
    if (!rep.relation_exact.empty()) {
        json rel = json::array();
        for (const auto& v : rep.relation_exact) rel.push_back(v.to_string());
        j["relation_exact"] = rel;
    }
    if (!rep.relation.empty()) j["relation"] = rep.relation;
    j["witness"] = to_json(rep.witness);
    if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
    return j;
}

} // namespace jointorbit
