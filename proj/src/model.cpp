#include "jointorbit/model.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jointorbit {

using nlohmann::json;

Region unit_box(int dim) {
    Region r;
    r.iv.assign(static_cast<std::size_t>(dim), Interval{-1.0, 1.0});
    return r;
}

void SampleCfg::validate() const {
    if (trials < 1) throw SpecError("trials must be >= 1");
    if (!(tol > 0.0 && tol < 1.0)) throw SpecError("tol must lie in (0, 1)");
    if (box) {
        for (const auto& iv : box->iv)
            if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
                throw SpecError("box intervals must be finite with lo < hi");
    }
}

Region SampleCfg::box_for(int dim) const {
    if (!box) return unit_box(dim);
    if (box->dim() != dim)
        throw SpecError("box has dimension " + std::to_string(box->dim()) + ", expected " +
                        std::to_string(dim));
    return *box;
}

// --------------------------------------------------------------------------
// document I/O

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    // builtins are reserved so that f(x) is never ambiguous
    static const char* reserved[] = {"sin", "cos", "exp", "sqrt", "abs", "hstep"};
    for (const char* r : reserved)
        if (s == r) return false;
    return true;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw SpecError(std::string("document parse error: ") + e.what());
    }
}

void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw SpecError("unknown field '" + it.key() + "'");
    }
}

std::vector<std::string> read_coords(const json& j, const char* field, int dim) {
    if (!j.contains(field) || !j[field].is_array())
        throw SpecError(std::string("'") + field + "' must be an array of names");
    std::vector<std::string> coords;
    for (const auto& c : j[field]) {
        if (!c.is_string()) throw SpecError(std::string("'") + field + "' entries must be strings");
        coords.push_back(c.get<std::string>());
    }
    if (static_cast<int>(coords.size()) != dim)
        throw SpecError(std::string("'") + field + "' must list exactly " + std::to_string(dim) +
                        " names");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!valid_identifier(coords[i]))
            throw SpecError("invalid coordinate name '" + coords[i] + "'");
        for (std::size_t k = 0; k < i; ++k)
            if (coords[k] == coords[i])
                throw SpecError("duplicate coordinate name '" + coords[i] + "'");
    }
    return coords;
}

int read_positive_int(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number_integer())
        throw SpecError(std::string("'") + field + "' must be a positive integer");
    long long v = j[field].get<long long>();
    if (v < 1 || v > 64) throw SpecError(std::string("'") + field + "' out of range [1, 64]");
    return static_cast<int>(v);
}

std::string read_name(const json& j) {
    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
        throw SpecError("'name' must be a non-empty string");
    return j["name"].get<std::string>();
}

Expr parse_component(const json& cell, const std::vector<std::string>& coords,
                     const std::string& where) {
    if (!cell.is_string()) throw SpecError(where + ": expression must be a string");
    try {
        return Expr::parse(cell.get<std::string>(), coords);
    } catch (const ParseError& e) {
        throw SpecError(where + ": " + e.what());
    }
}

Region read_region(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw SpecError(where + ": region must list " + std::to_string(dim) + " intervals");
    Region reg;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw SpecError(where + ": interval must be [lo, hi]");
        Interval iv{pair[0].get<double>(), pair[1].get<double>()};
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
            throw SpecError(where + ": need finite lo < hi");
        reg.iv.push_back(iv);
    }
    return reg;
}

} // namespace

ActionSpec load_spec_text(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("kind") || j["kind"] != "action")
        throw SpecError("expected a document with \"kind\": \"action\"");
    reject_unknown_fields(j, {"kind", "name", "dim", "coordinates", "generators", "regions",
                              "analytic_hint"});
    ActionSpec spec;
    spec.name = read_name(j);
    spec.m = read_positive_int(j, "dim");
    spec.coords = read_coords(j, "coordinates", spec.m);
    if (j.contains("analytic_hint")) {
        if (!j["analytic_hint"].is_boolean()) throw SpecError("'analytic_hint' must be a boolean");
        spec.analytic_hint = j["analytic_hint"].get<bool>();
    }
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
        throw SpecError("'generators' must be a non-empty array");
    int gi = 0;
    for (const auto& gen : j["generators"]) {
        if (!gen.is_array() || static_cast<int>(gen.size()) != spec.m)
            throw SpecError("generator " + std::to_string(gi) + " must have exactly " +
                            std::to_string(spec.m) + " coefficients");
        VectorField vf;
        int ci = 0;
        for (const auto& cell : gen) {
            vf.coeff.push_back(parse_component(
                cell, spec.coords,
                "generator " + std::to_string(gi) + ", component " + std::to_string(ci)));
            ++ci;
        }
        spec.generators.push_back(std::move(vf));
        ++gi;
    }
    if (j.contains("regions")) {
        if (!j["regions"].is_object()) throw SpecError("'regions' must be an object");
        for (auto it = j["regions"].begin(); it != j["regions"].end(); ++it)
            spec.regions.emplace(it.key(), read_region(it.value(), spec.m, "region '" + it.key() + "'"));
    }
    spec.polynomial = true;
    for (const auto& g : spec.generators)
        for (const auto& c : g.coeff)
            if (!to_poly(c)) spec.polynomial = false;
    return spec;
}

FunctionFamily load_family_text(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("kind") || j["kind"] != "functions")
        throw SpecError("expected a document with \"kind\": \"functions\"");
    reject_unknown_fields(j, {"kind", "name", "xdim", "xcoordinates", "qdim", "functions"});
    FunctionFamily fam;
    fam.name = read_name(j);
    fam.p = read_positive_int(j, "xdim");
    fam.xcoords = read_coords(j, "xcoordinates", fam.p);
    fam.q = read_positive_int(j, "qdim");
    if (!j.contains("functions") || !j["functions"].is_array() || j["functions"].empty())
        throw SpecError("'functions' must be a non-empty array");
    int fi = 0;
    for (const auto& fn : j["functions"]) {
        if (!fn.is_array() || static_cast<int>(fn.size()) != fam.q)
            throw SpecError("function " + std::to_string(fi) + " must have exactly " +
                            std::to_string(fam.q) + " components");
        std::vector<Expr> comps;
        int ci = 0;
        for (const auto& cell : fn) {
            comps.push_back(parse_component(
                cell, fam.xcoords,
                "function " + std::to_string(fi) + ", component " + std::to_string(ci)));
            ++ci;
        }
        fam.functions.push_back(std::move(comps));
        ++fi;
    }
    fam.polynomial = true;
    for (const auto& f : fam.functions)
        for (const auto& c : f)
            if (!to_poly(c)) fam.polynomial = false;
    return fam;
}

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

ActionSpec load_spec_file(const std::string& path) { return load_spec_text(slurp(path)); }
FunctionFamily load_family_file(const std::string& path) { return load_family_text(slurp(path)); }

Document load_document_text(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw SpecError("document must carry a \"kind\" field");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "action") return load_spec_text(text);
    if (kind == "functions") return load_family_text(text);
    throw SpecError("unknown document kind '" + kind + "'");
}

std::string serialize(const ActionSpec& spec) {
    json j;
    j["kind"] = "action";
    j["name"] = spec.name;
    j["dim"] = spec.m;
    j["coordinates"] = spec.coords;
    json gens = json::array();
    for (const auto& g : spec.generators) {
        json row = json::array();
        for (const auto& c : g.coeff) row.push_back(c.source());
        gens.push_back(row);
    }
    j["generators"] = gens;
    if (!spec.regions.empty()) {
        json regs = json::object();
        for (const auto& [name, reg] : spec.regions) {
            json arr = json::array();
            for (const auto& iv : reg.iv) arr.push_back(json::array({iv.lo, iv.hi}));
            regs[name] = arr;
        }
        j["regions"] = regs;
    }
    if (spec.analytic_hint) j["analytic_hint"] = true;
    return j.dump(2) + "\n";
}

std::string serialize(const FunctionFamily& fam) {
    json j;
    j["kind"] = "functions";
    j["name"] = fam.name;
    j["xdim"] = fam.p;
    j["xcoordinates"] = fam.xcoords;
    j["qdim"] = fam.q;
    json fns = json::array();
    for (const auto& f : fam.functions) {
        json row = json::array();
        for (const auto& c : f) row.push_back(c.source());
        fns.push_back(row);
    }
    j["functions"] = fns;
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------------------
// fixtures

namespace {

struct FixtureDef {
    const char* name;
    const char* text;
};

const FixtureDef kFixtures[] = {
    {"se2",
     R"json({"kind":"action","name":"se2","dim":2,"coordinates":["x","y"],
"generators":[["1","0"],["0","1"],["y","-x"]]})json"},
    {"gl3",
     R"json({"kind":"action","name":"gl3","dim":2,"coordinates":["x","y"],
"generators":[["x","0"],["y","0"],["1","0"],["0","x"],["0","y"],["0","1"],
["-x^2","-x*y"],["-x*y","-y^2"],["-x","-y"]]})json"},
    {"sim2",
     R"json({"kind":"action","name":"sim2","dim":2,"coordinates":["x","y"],
"generators":[["1","0"],["0","1"],["y","-x"],["x","y"]]})json"},
    {"polar",
     R"json({"kind":"action","name":"polar","dim":2,"coordinates":["x","y"],
"generators":[["-y*sqrt(x^2+y^2)","x*sqrt(x^2+y^2)"]]})json"},
    {"bump",
     R"json({"kind":"action","name":"bump","dim":2,"coordinates":["x","y"],
"generators":[["0","hstep(x)"],["0","hstep(-x)"]],
"regions":{"pos":[[0.1,1],[-1,1]],"neg":[[-1,-0.1],[-1,1]]}})json"},
    {"monomials3",
     R"json({"kind":"functions","name":"monomials3","xdim":1,"xcoordinates":["x"],"qdim":1,
"functions":[["1"],["x"],["x^2"]]})json"},
    {"dependent-pair",
     R"json({"kind":"functions","name":"dependent-pair","xdim":1,"xcoordinates":["x"],"qdim":1,
"functions":[["x"],["2*x"]]})json"},
};

} // namespace

const std::vector<std::string>& builtin_fixture_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& f : kFixtures) v.push_back(f.name);
        return v;
    }();
    return names;
}

const std::string& builtin_fixture_text(const std::string& name) {
    // canonical serialized form, cached per fixture
    static const std::map<std::string, std::string> texts = [] {
        std::map<std::string, std::string> m;
        for (const auto& f : kFixtures) {
            Document d = load_document_text(f.text);
            m[f.name] = std::visit([](const auto& doc) { return serialize(doc); }, d);
        }
        return m;
    }();
    auto it = texts.find(name);
    if (it == texts.end()) throw SpecError("unknown fixture '" + name + "'");
    return it->second;
}

Document builtin_fixture(const std::string& name) {
    return load_document_text(builtin_fixture_text(name));
}

// --------------------------------------------------------------------------
// sampling

namespace {
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt) {
    state_ = mix64(mix64(mix64(seed) ^ trial) ^ salt);
}

std::uint64_t TrialRng::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double TrialRng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TrialRng::uniform(double lo, double hi) {
    for (int i = 0; i < 64; ++i) {
        double x = lo + (hi - lo) * unit();
        if (x > lo && x < hi) return x;
    }
    return 0.5 * (lo + hi);
}

std::uint64_t TrialRng::below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

namespace {

// floor of num/den as a plain integer (|result| must fit in int64)
long long floor_div_i64(const BigInt& num, const BigInt& den) {
    BigInt q, r;
    BigInt::divmod(num, den, q, r);
    if (!r.is_zero() && num.sign() < 0) q = q - BigInt(1);
    if (!q.fits_int64()) throw SpecError("box too wide for exact sampling");
    return q.to_int64();
}

// integer grid k/denom strictly inside (lo, hi)
struct Grid {
    long long klo, khi;
    long long denom;
};

Grid exact_grid(double lo, double hi) {
    long long denom = 1000;
    for (;;) {
        Rational loR = Rational::from_double(lo) * Rational(denom);
        Rational hiR = Rational::from_double(hi) * Rational(denom);
        long long klo = floor_div_i64(loR.num(), loR.den()) + 1;
        // ceil(x) - 1 == -floor(-x) - 1
        long long khi = -floor_div_i64((-hiR).num(), (-hiR).den()) - 1;
        long long span = khi - klo + 1;
        if (span >= 1000) return Grid{klo, khi, denom};
        if (denom >= 1000000000000ll) {
            if (span >= 1) return Grid{klo, khi, denom};
            throw SpecError("interval too narrow for exact sampling");
        }
        denom *= 10;
    }
}

} // namespace

PointTuple sample_tuple_in(const Region& box, int n, bool exact, std::uint64_t seed,
                           std::uint64_t trial_index, std::uint64_t salt) {
    if (n < 1) throw SpecError("tuple order must be >= 1");
    const int dim = box.dim();
    TrialRng rng(seed, trial_index, salt);
    PointTuple tup;
    tup.pts.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim)));
    if (exact) {
        std::vector<Grid> grids;
        grids.reserve(static_cast<std::size_t>(dim));
        for (const auto& iv : box.iv) grids.push_back(exact_grid(iv.lo, iv.hi));
        std::vector<std::vector<Rational>> rat(
            static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(dim)));
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < dim; ++i) {
                const Grid& g = grids[static_cast<std::size_t>(i)];
                std::uint64_t span = static_cast<std::uint64_t>(g.khi - g.klo + 1);
                long long k = g.klo + static_cast<long long>(rng.below(span));
                Rational v(BigInt(k), BigInt(g.denom));
                rat[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
                tup.pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v.to_double();
            }
        }
        tup.exact = std::move(rat);
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < dim; ++i) {
                const auto& iv = box.iv[static_cast<std::size_t>(i)];
                tup.pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    rng.uniform(iv.lo, iv.hi);
            }
    }
    return tup;
}

PointTuple sample_tuple(const ActionSpec& spec, int n, const SampleCfg& cfg,
                        std::uint64_t trial_index) {
    cfg.validate();
    Region box = cfg.box_for(spec.m);
    bool exact = cfg.exact.value_or(spec.polynomial);
    if (exact && !spec.polynomial)
        throw BackendError("exact sampling requested for a non-polynomial spec");
    return sample_tuple_in(box, n, exact, cfg.seed, trial_index);
}

} // namespace jointorbit
