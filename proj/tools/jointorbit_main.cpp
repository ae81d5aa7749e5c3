// jointorbit: analyze the simultaneous action of a Lie group on n copies of
// a manifold chart. Subcommands wrap the library operations; every run emits
// a human summary and, with --porcelain or --out, a machine JSON report.

#include "jointorbit/diagnostics.hpp"
#include "jointorbit/independence.hpp"
#include "jointorbit/report_json.hpp"
#include "jointorbit/stabilization.hpp"
#include "jointorbit/version.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace jo = jointorbit;
using nlohmann::json;

namespace {

// --- input resolution -------------------------------------------------------

struct LoadedDoc {
    jo::Document doc;
    std::string text;
    std::string origin; // path or "builtin:<name>"
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedDoc resolve_document(const std::string& arg) {
    namespace fs = std::filesystem;
    for (const std::string& candidate : {arg, arg + ".json"}) {
        if (fs::exists(candidate) && fs::is_regular_file(candidate)) {
            std::string text = read_file(candidate);
            return {jo::load_document_text(text), text, candidate};
        }
    }
    std::string base = fs::path(arg).filename().string();
    if (base.size() > 5 && base.ends_with(".json")) base.resize(base.size() - 5);
    for (const auto& name : jo::builtin_fixture_names()) {
        if (name == base) {
            const std::string& text = jo::builtin_fixture_text(name);
            return {jo::load_document_text(text), text, "builtin:" + name};
        }
    }
    throw jo::SpecError("no such file or builtin fixture: '" + arg + "'");
}

jo::ActionSpec expect_action(LoadedDoc& d) {
    if (auto* spec = std::get_if<jo::ActionSpec>(&d.doc)) return std::move(*spec);
    throw jo::SpecError("expected an action spec (kind \"action\"), got a function family");
}

jo::FunctionFamily expect_family(LoadedDoc& d) {
    if (auto* fam = std::get_if<jo::FunctionFamily>(&d.doc)) return std::move(*fam);
    throw jo::SpecError("expected a function family (kind \"functions\"), got an action spec");
}

std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- flag parsing ------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

jo::PointTuple parse_points(const std::string& text, int dim) {
    jo::PointTuple tup;
    std::vector<std::vector<jo::Rational>> exact;
    for (const std::string& part : split(text, ';')) {
        std::vector<double> pt;
        std::vector<jo::Rational> pq;
        for (const std::string& cell : split(part, ',')) {
            auto r = jo::Rational::parse(cell);
            if (!r) throw jo::SpecError("cannot parse coordinate '" + cell + "'");
            pq.push_back(*r);
            pt.push_back(r->to_double());
        }
        if (static_cast<int>(pt.size()) != dim)
            throw jo::SpecError("point '" + part + "' has " + std::to_string(pt.size()) +
                                " coordinates, expected " + std::to_string(dim));
        tup.pts.push_back(std::move(pt));
        exact.push_back(std::move(pq));
    }
    tup.exact = std::move(exact);
    return tup;
}

jo::Region parse_box(const std::string& text) {
    jo::Region reg;
    for (const std::string& part : split(text, ';')) {
        auto cells = split(part, ',');
        if (cells.size() != 2)
            throw jo::SpecError("box interval '" + part + "' must be lo,hi");
        auto lo = jo::Rational::parse(cells[0]), hi = jo::Rational::parse(cells[1]);
        if (!lo || !hi) throw jo::SpecError("cannot parse box interval '" + part + "'");
        jo::Interval iv{lo->to_double(), hi->to_double()};
        if (!(iv.lo < iv.hi)) throw jo::SpecError("box interval needs lo < hi: '" + part + "'");
        reg.iv.push_back(iv);
    }
    return reg;
}

// --- command plumbing ---------------------------------------------------------

struct CommonOpts {
    std::uint64_t seed = 42;
    long long trials = 32;
    double tol = 1e-9;
    bool force_exact = false;
    bool force_float = false;
    std::string box;
    std::string out;
    bool porcelain = false;

    jo::SampleCfg cfg() const {
        jo::SampleCfg c;
        c.seed = seed;
        c.trials = trials;
        c.tol = tol;
        if (force_exact && force_float) throw jo::SpecError("--exact and --float conflict");
        if (force_exact) c.exact = true;
        if (force_float) c.exact = false;
        if (!box.empty()) c.box = parse_box(box);
        return c;
    }

    json cfg_json() const {
        json j;
        j["seed"] = seed;
        j["trials"] = trials;
        j["tol"] = tol;
        j["backend"] = force_exact ? "exact" : force_float ? "float" : "auto";
        if (!box.empty()) j["box"] = jo::to_json(parse_box(box));
        return j;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "random seed (default 42)");
    cmd->add_option("--trials", o.trials, "sampling trials (default 32)");
    cmd->add_option("--tol", o.tol, "relative rank tolerance (default 1e-9)");
    cmd->add_flag("--exact", o.force_exact, "force the exact rational backend");
    cmd->add_flag("--float", o.force_float, "force the floating backend");
    cmd->add_option("--box", o.box, "sampling box \"lo,hi;lo,hi;...\" (default unit box)");
    cmd->add_option("--out", o.out, "write the JSON report to this file");
    cmd->add_flag("--porcelain", o.porcelain, "print the JSON report to stdout");
}

int emit(const CommonOpts& o, const std::string& command, const std::string& digest,
         const json& cfg_echo, const json& result, const std::vector<std::string>& warnings,
         double ms, const std::string& summary) {
    json rep;
    rep["version"] = jo::kVersion;
    rep["command"] = command;
    rep["input_digest"] = digest;
    rep["cfg"] = cfg_echo;
    rep["result"] = result;
    rep["warnings"] = warnings;
    rep["timing_ms"] = ms; // excluded from the determinism contract
    const std::string dumped = rep.dump(2) + "\n";
    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw jo::SpecError("cannot write '" + o.out + "'");
        f << dumped;
    }
    if (o.porcelain)
        std::cout << dumped;
    else
        std::cout << summary << "\n";
    return 0;
}

std::string tuple_summary(const jo::PointTuple& t) {
    std::string s = "(";
    for (int j = 0; j < t.order(); ++j) {
        if (j) s += "; ";
        for (int i = 0; i < t.dim(); ++i) {
            if (i) s += ",";
            if (t.has_exact())
                s += (*t.exact)[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]
                         .to_string();
            else
                s += jo::format_shortest(t.pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
    }
    return s + ")";
}

std::string join_ints(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

jo::Region resolve_region(const jo::ActionSpec& spec, const std::string& region_flag,
                          const CommonOpts& o) {
    if (!region_flag.empty()) {
        if (region_flag.find(',') != std::string::npos) return parse_box(region_flag);
        auto it = spec.regions.find(region_flag);
        if (it == spec.regions.end())
            throw jo::SpecError("spec '" + spec.name + "' has no region named '" + region_flag +
                                "'");
        return it->second;
    }
    if (!o.box.empty()) return parse_box(o.box);
    return jo::unit_box(spec.m);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "joint orbit analysis of Lie group actions: stabilization order, joint invariant "
        "counts, effectiveness on regions, rank-stratum diagnostics, and multi-point "
        "Wronskian independence tests"};
    app.set_version_flag("--version", jo::kVersion);
    app.require_subcommand(1);

    // stabilize
    std::string stab_path;
    CommonOpts stab_o;
    bool stab_extended = false;
    auto* stab = app.add_subcommand("stabilize", "orbit dimension sequence and stabilization");
    stab->add_option("spec", stab_path, "action spec file or builtin fixture")->required();
    stab->add_flag("--extended", stab_extended, "also compute two orders past stabilization");
    add_common(stab, stab_o);

    // rank
    std::string rank_path, rank_points;
    CommonOpts rank_o;
    int rank_order = 0;
    bool rank_sample = false, rank_dump = false;
    auto* rank = app.add_subcommand("rank", "joint Lie matrix rank at explicit or sampled tuples");
    rank->add_option("spec", rank_path)->required();
    rank->add_option("--order", rank_order, "tuple order n");
    rank->add_option("--points", rank_points, "explicit tuple \"x,y;x,y;...\"");
    rank->add_flag("--sample", rank_sample, "sample tuples (default when --points absent)");
    rank->add_flag("--dump-matrix", rank_dump, "include the evaluated matrix in the report");
    add_common(rank, rank_o);

    // effective
    std::string eff_path, eff_region;
    CommonOpts eff_o;
    auto* eff = app.add_subcommand("effective", "effectiveness of the action on a region");
    eff->add_option("spec", eff_path)->required();
    eff->add_option("--region", eff_region, "named region from the spec, or bounds \"lo,hi;...\"");
    add_common(eff, eff_o);

    // independent
    std::string ind_path, ind_region;
    CommonOpts ind_o;
    auto* ind = app.add_subcommand("independent",
                                   "linear independence of a function family on a region");
    ind->add_option("family", ind_path)->required();
    ind->add_option("--region", ind_region, "bounds \"lo,hi;...\" (default unit box)");
    add_common(ind, ind_o);

    // invariants
    std::string inv_path;
    CommonOpts inv_o;
    int inv_order = 0;
    auto* inv = app.add_subcommand("invariants", "count of independent joint invariants");
    inv->add_option("spec", inv_path)->required();
    inv->add_option("--order", inv_order, "tuple order n")->required();
    add_common(inv, inv_o);

    // check-invariance
    std::string chk_path;
    CommonOpts chk_o;
    int chk_order = 0, chk_flows = 10;
    auto* chk = app.add_subcommand("check-invariance",
                                   "rank strata are preserved by sampled group elements");
    chk->add_option("spec", chk_path)->required();
    chk->add_option("--order", chk_order, "tuple order (default: stabilization order)");
    chk->add_option("--flows", chk_flows, "flows per tuple (default 10)");
    add_common(chk, chk_o);

    // lie-det
    std::string det_path, det_points;
    CommonOpts det_o;
    auto* det = app.add_subcommand("lie-det", "determinant of the square joint Lie matrix");
    det->add_option("spec", det_path)->required();
    det->add_option("--points", det_points, "explicit tuple (sampled when absent)");
    add_common(det, det_o);

    // complete-tuple
    std::string cmp_path, cmp_point;
    CommonOpts cmp_o;
    auto* cmp = app.add_subcommand("complete-tuple",
                                   "extend a base point into a maximal-dimension orbit");
    cmp->add_option("spec", cmp_path)->required();
    cmp->add_option("--point", cmp_point, "base point \"x,y\"")->required();
    add_common(cmp, cmp_o);

    // examples
    CommonOpts ex_o;
    auto* ex = app.add_subcommand("examples", "list or show the builtin fixture gallery");
    std::string ex_action, ex_name;
    ex->add_option("what", ex_action, "list | show")->required();
    ex->add_option("name", ex_name, "fixture name (for show)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    try {
        if (*stab) {
            LoadedDoc d = resolve_document(stab_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = stab_o.cfg();
            jo::StabilizationReport rep = jo::stabilize(spec, cfg, stab_extended ? 1 : 0);
            std::string summary =
                "spec " + spec.name + ": s = " + join_ints(rep.s) + ", stabilization order " +
                std::to_string(rep.n0) + ", stabilization dimension " + std::to_string(rep.s_stab) +
                ", invariant counts " + join_ints(rep.invariant_counts) +
                ", effective on subsets: " + jo::verdict_name(rep.verdict);
            return emit(stab_o, "stabilize", fnv1a64(d.text), stab_o.cfg_json(), jo::to_json(rep),
                        rep.warnings, elapsed_ms(), summary);
        }
        if (*rank) {
            LoadedDoc d = resolve_document(rank_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = rank_o.cfg();
            json cfg_echo = rank_o.cfg_json();
            json result;
            std::string summary;
            if (!rank_points.empty()) {
                jo::PointTuple tup = parse_points(rank_points, spec.m);
                if (rank_order > 0 && rank_order != tup.order())
                    throw jo::SpecError("--order is " + std::to_string(rank_order) + " but " +
                                        std::to_string(tup.order()) + " points were given");
                cfg_echo["order"] = tup.order();
                jo::Backend backend =
                    jo::choose_backend(spec.polynomial, tup.has_exact(), cfg.exact);
                jo::JointMatrix mat = jo::lie_matrix(spec, tup, backend);
                jo::RankReport rr = jo::matrix_rank(mat, cfg.tol);
                result = jo::to_json(rr);
                result["tuple"] = jo::to_json(tup);
                if (rank_dump) result["matrix_dump"] = jo::dump_matrix(mat);
                summary = "rank " + std::to_string(rr.rank) + " (backend " +
                          jo::backend_name(rr.backend) + ", order " + std::to_string(tup.order()) +
                          ")";
                if (rank_dump) summary += "\n" + jo::dump_matrix(mat);
            } else {
                if (rank_order < 1)
                    throw jo::SpecError("--order is required when sampling (no --points)");
                cfg_echo["order"] = rank_order;
                jo::GenericRankResult gr = jo::generic_rank(spec, rank_order, cfg);
                result = jo::to_json(gr);
                if (rank_dump) {
                    jo::Backend backend = jo::choose_backend(
                        spec.polynomial, gr.witness.has_exact(), cfg.exact);
                    result["matrix_dump"] = jo::dump_matrix(jo::lie_matrix(spec, gr.witness, backend));
                }
                summary = "generic rank " + std::to_string(gr.rank) + " at order " +
                          std::to_string(rank_order) + " (backend " +
                          jo::backend_name(gr.backend) + ", witness trial " +
                          std::to_string(gr.scan.witness_trial) + ")";
            }
            return emit(rank_o, "rank", fnv1a64(d.text), cfg_echo, result, {}, elapsed_ms(),
                        summary);
        }
        if (*eff) {
            LoadedDoc d = resolve_document(eff_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = eff_o.cfg();
            jo::Region region = resolve_region(spec, eff_region, eff_o);
            json cfg_echo = eff_o.cfg_json();
            if (!eff_region.empty()) cfg_echo["region"] = eff_region;
            jo::EffectivenessReport rep = jo::effectiveness_on_region(spec, region, cfg);
            std::string summary = "spec " + spec.name + ": max rank " +
                                  std::to_string(rep.max_rank_found) + " of " +
                                  std::to_string(rep.required) + " -> " +
                                  jo::verdict_name(rep.verdict);
            return emit(eff_o, "effective", fnv1a64(d.text), cfg_echo, jo::to_json(rep), {},
                        elapsed_ms(), summary);
        }
        if (*ind) {
            LoadedDoc d = resolve_document(ind_path);
            jo::FunctionFamily fam = expect_family(d);
            jo::SampleCfg cfg = ind_o.cfg();
            jo::Region region = ind_region.empty()
                                    ? (ind_o.box.empty() ? jo::unit_box(fam.p)
                                                         : parse_box(ind_o.box))
                                    : parse_box(ind_region);
            json cfg_echo = ind_o.cfg_json();
            if (!ind_region.empty()) cfg_echo["region"] = ind_region;
            jo::IndependenceReport rep = jo::independence_on_region(fam, region, cfg);
            std::string summary = "family " + fam.name + ": max Wronskian rank " +
                                  std::to_string(rep.max_wronskian_rank) + " of " +
                                  std::to_string(rep.r) + " -> " + jo::verdict_name(rep.verdict);
            if (!rep.relation.empty()) {
                summary += ", relation (";
                for (std::size_t i = 0; i < rep.relation.size(); ++i) {
                    if (i) summary += ", ";
                    summary += rep.relation_exact.empty()
                                   ? jo::format_shortest(rep.relation[i])
                                   : rep.relation_exact[i].to_string();
                }
                summary += ")";
            }
            return emit(ind_o, "independent", fnv1a64(d.text), cfg_echo, jo::to_json(rep),
                        rep.warnings, elapsed_ms(), summary);
        }
        if (*inv) {
            LoadedDoc d = resolve_document(inv_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = inv_o.cfg();
            jo::GenericRankResult gr = jo::generic_rank(spec, inv_order, cfg);
            const int count = inv_order * spec.m - gr.rank;
            json result;
            result["order"] = inv_order;
            result["invariant_count"] = count;
            result["s_n"] = gr.rank;
            result["backend"] = jo::backend_name(gr.backend);
            result["heuristic"] = gr.heuristic;
            result["witness"] = jo::to_json(gr.witness);
            json cfg_echo = inv_o.cfg_json();
            cfg_echo["order"] = inv_order;
            std::string summary = std::to_string(count) +
                                  " functionally independent joint invariants at order " +
                                  std::to_string(inv_order) + " (s_n = " + std::to_string(gr.rank) +
                                  ")";
            return emit(inv_o, "invariants", fnv1a64(d.text), cfg_echo, result, {}, elapsed_ms(),
                        summary);
        }
        if (*chk) {
            LoadedDoc d = resolve_document(chk_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = chk_o.cfg();
            int order = chk_order;
            std::vector<std::string> warnings;
            if (order < 1) {
                jo::StabilizationReport st = jo::stabilize(spec, cfg);
                order = st.n0;
                warnings.push_back("order defaulted to the stabilization order " +
                                   std::to_string(order));
            }
            jo::InvarianceReport rep = jo::check_rank_invariance(spec, order, cfg, chk_flows);
            json cfg_echo = chk_o.cfg_json();
            cfg_echo["order"] = order;
            std::string summary = "order " + std::to_string(order) + ": " +
                                  std::to_string(rep.cases_checked) + " checked, " +
                                  std::to_string(rep.mismatches) + " rank changes, " +
                                  std::to_string(rep.cases_skipped) + " skipped -> " +
                                  (rep.pass ? "PASS" : "FAIL");
            if (!rep.pass) {
                emit(chk_o, "check-invariance", fnv1a64(d.text), cfg_echo, jo::to_json(rep),
                     warnings, elapsed_ms(), summary);
                return 3;
            }
            return emit(chk_o, "check-invariance", fnv1a64(d.text), cfg_echo, jo::to_json(rep),
                        warnings, elapsed_ms(), summary);
        }
        if (*det) {
            LoadedDoc d = resolve_document(det_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = det_o.cfg();
            if (spec.r() % spec.m != 0)
                throw jo::SpecError("Lie determinant needs a square matrix: r = " +
                                    std::to_string(spec.r()) + " is not a multiple of m = " +
                                    std::to_string(spec.m));
            const int n = spec.r() / spec.m;
            jo::PointTuple tup;
            if (!det_points.empty()) {
                tup = parse_points(det_points, spec.m);
            } else {
                tup = jo::sample_tuple(spec, n, cfg, 0);
            }
            jo::LieDeterminant ld = jo::lie_determinant(spec, tup, cfg);
            json result = jo::to_json(ld);
            result["tuple"] = jo::to_json(tup);
            json cfg_echo = det_o.cfg_json();
            cfg_echo["order"] = n;
            std::string summary = "det = " + (ld.exact ? ld.exact->to_string()
                                                       : jo::format_shortest(ld.value)) +
                                  " at " + tuple_summary(tup);
            return emit(det_o, "lie-det", fnv1a64(d.text), cfg_echo, result, {}, elapsed_ms(),
                        summary);
        }
        if (*cmp) {
            LoadedDoc d = resolve_document(cmp_path);
            jo::ActionSpec spec = expect_action(d);
            jo::SampleCfg cfg = cmp_o.cfg();
            jo::PointTuple base = parse_points(cmp_point, spec.m);
            if (base.order() != 1) throw jo::SpecError("--point must be a single point");
            jo::StabilizationReport st = jo::stabilize(spec, cfg);
            jo::PointTuple full = jo::complete_tuple(spec, base, cfg, &st);
            jo::Backend backend = jo::choose_backend(spec.polynomial, full.has_exact(), cfg.exact);
            jo::RankReport rr = jo::matrix_rank(jo::lie_matrix(spec, full, backend), cfg.tol);
            json result;
            result["tuple"] = jo::to_json(full);
            result["rank"] = rr.rank;
            result["stabilization_dimension"] = st.s_stab;
            result["n0"] = st.n0;
            result["backend"] = jo::backend_name(rr.backend);
            std::string summary = "completed to an order-" + std::to_string(full.order()) +
                                  " tuple of rank " + std::to_string(rr.rank) + ": " +
                                  tuple_summary(full);
            return emit(cmp_o, "complete-tuple", fnv1a64(d.text), cmp_o.cfg_json(), result,
                        st.warnings, elapsed_ms(), summary);
        }
        if (*ex) {
            if (ex_action == "list") {
                for (const auto& name : jo::builtin_fixture_names()) std::cout << name << "\n";
                return 0;
            }
            if (ex_action == "show") {
                if (ex_name.empty()) throw jo::SpecError("examples show needs a fixture name");
                std::cout << jo::builtin_fixture_text(ex_name);
                return 0;
            }
            throw jo::SpecError("examples: expected 'list' or 'show'");
        }
    } catch (const jo::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jo::BackendError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jo::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jo::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const jo::MatrixEvalError& e) {
        std::cerr << "evaluation failure: " << e.what() << "\n";
        return 3;
    } catch (const jo::FlowError& e) {
        std::cerr << "flow failure: " << e.what() << "\n";
        return 3;
    } catch (const jo::EvalError& e) {
        std::cerr << "evaluation failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
