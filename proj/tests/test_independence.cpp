#include "jointorbit/diagnostics.hpp"
#include "jointorbit/independence.hpp"

#include "doctest.h"

#include <cmath>

using namespace jointorbit;

namespace {

FunctionFamily family(const char* name) {
    return std::get<FunctionFamily>(builtin_fixture(name));
}

FunctionFamily bump_family() {
    return load_family_text(R"js({"kind":"functions","name":"bumpf","xdim":1,
        "xcoordinates":["x"],"qdim":1,"functions":[["hstep(x)"],["hstep(0-x)"]]})js");
}

// tuple with given base points and fiber values appended
PointTuple with_fibers(const PointTuple& base, const std::vector<std::vector<double>>& fibers) {
    PointTuple t;
    for (std::size_t j = 0; j < base.pts.size(); ++j) {
        std::vector<double> p = base.pts[j];
        p.insert(p.end(), fibers[j].begin(), fibers[j].end());
        t.pts.push_back(std::move(p));
    }
    return t;
}

} // namespace

TEST_SUITE("independence") {

    TEST_CASE("monomials are independent") {
        SampleCfg cfg;
        IndependenceReport rep = independence_on_region(family("monomials3"), unit_box(1), cfg);
        CHECK(rep.verdict == IndependenceReport::Verdict::Independent);
        CHECK(rep.max_wronskian_rank == 3);
        CHECK(rep.backend == Backend::Exact);
        CHECK(rep.relation.empty());
    }

    TEST_CASE("dependent pair certifies the relation 2x - (2x) = 0") {
        SampleCfg cfg;
        IndependenceReport rep = independence_on_region(family("dependent-pair"), unit_box(1), cfg);
        CHECK(rep.verdict == IndependenceReport::Verdict::DependentOnRegion);
        CHECK(rep.max_wronskian_rank == 1);
        REQUIRE(rep.relation_exact.size() == 2);
        CHECK(rep.relation_exact[0] == Rational(2));
        CHECK(rep.relation_exact[1] == Rational(-1));
    }

    TEST_CASE("bump family on the positive half is heuristically dependent") {
        SampleCfg cfg;
        Region pos;
        pos.iv = {Interval{0.1, 1.0}};
        IndependenceReport rep = independence_on_region(bump_family(), pos, cfg);
        CHECK(rep.verdict == IndependenceReport::Verdict::HeuristicDependent);
        CHECK(rep.max_wronskian_rank == 1);
        REQUIRE(rep.relation.size() == 2);
        // hstep(-x) vanishes identically there: direction (0, 1)
        CHECK(std::fabs(rep.relation[0]) < 1e-12);
        CHECK(rep.relation[1] == doctest::Approx(1.0));
    }

    TEST_CASE("bump family on the symmetric box is independent") {
        SampleCfg cfg;
        IndependenceReport rep = independence_on_region(bump_family(), unit_box(1), cfg);
        CHECK(rep.verdict == IndependenceReport::Verdict::Independent);
        CHECK(rep.max_wronskian_rank == 2);
    }

    TEST_CASE("induced translation action on X x R^q") {
        std::vector<std::string> warnings;
        ActionSpec mono = induced_action_oracle(family("monomials3"), &warnings);
        CHECK(warnings.empty());
        CHECK(mono.m == 2);
        CHECK(mono.r() == 3);
        CHECK(mono.coords == std::vector<std::string>{"x", "v1"});
        std::vector<double> pt = {0.5, 7.0}; // fiber value must not matter
        CHECK(mono.generators[0].coeff[0].eval(pt) == 0.0);
        CHECK(mono.generators[0].coeff[1].eval(pt) == 1.0);
        CHECK(mono.generators[1].coeff[1].eval(pt) == 0.5);
        CHECK(mono.generators[2].coeff[1].eval(pt) == 0.25);
        CHECK(mono.polynomial);

        ActionSpec dep = induced_action_oracle(family("dependent-pair"));
        CHECK(dep.r() == 2);
        CHECK(dep.generators[1].coeff[1].eval(std::vector<double>{3.0, 0.0}) == 6.0);

        // the bump family recovers the bump action up to naming
        ActionSpec bmp = induced_action_oracle(bump_family());
        CHECK(bmp.m == 2);
        CHECK(bmp.r() == 2);
        CHECK(bmp.generators[0].coeff[1].eval(std::vector<double>{1.0, 0.0}) ==
              doctest::Approx(std::exp(-1.0)));
        CHECK(!bmp.polynomial);
    }

    TEST_CASE("fiber name collisions are renamed with a warning") {
        FunctionFamily fam = load_family_text(R"js({"kind":"functions","name":"clash","xdim":1,
            "xcoordinates":["v1"],"qdim":1,"functions":[["v1"],["2*v1"]]})js");
        std::vector<std::string> warnings;
        ActionSpec spec = induced_action_oracle(fam, &warnings);
        REQUIRE(warnings.size() == 1);
        CHECK(spec.coords == std::vector<std::string>{"v1", "w1"});
    }

    TEST_CASE("oracle ranks equal wronskian ranks at matched tuples") {
        SampleCfg cfg;
        for (const char* name : {"monomials3", "dependent-pair"}) {
            FunctionFamily fam = family(name);
            ActionSpec induced = induced_action_oracle(fam);
            for (int n = 1; n <= fam.r() + 1; ++n) {
                for (int trial = 0; trial < 10; ++trial) {
                    PointTuple base = sample_tuple_in(unit_box(fam.p), n, true, 5,
                                                      static_cast<std::uint64_t>(trial));
                    JointMatrix w = wronskian_matrix(fam, base, Backend::Exact);
                    // fibers: arbitrary rationals appended to each base point
                    PointTuple lifted = base;
                    for (int j = 0; j < n; ++j) {
                        for (int l = 0; l < fam.q; ++l) {
                            Rational fib(BigInt(17 * (j + 1) + 3 * l + trial), BigInt(7));
                            (*lifted.exact)[static_cast<std::size_t>(j)].push_back(fib);
                            lifted.pts[static_cast<std::size_t>(j)].push_back(fib.to_double());
                        }
                    }
                    JointMatrix lm = lie_matrix(induced, lifted, Backend::Exact);
                    CHECK(exact_rank(w).rank == exact_rank(lm).rank);
                }
            }
        }
        // non-polynomial family: float backends, same equality
        FunctionFamily bf = bump_family();
        ActionSpec binduced = induced_action_oracle(bf);
        for (int trial = 0; trial < 10; ++trial) {
            PointTuple base = sample_tuple_in(unit_box(1), 3, false, 11,
                                              static_cast<std::uint64_t>(trial));
            JointMatrix w = wronskian_matrix(bf, base, Backend::Float);
            PointTuple lifted = with_fibers(base, {{0.3}, {-2.0}, {5.5}});
            JointMatrix lm = lie_matrix(binduced, lifted, Backend::Float);
            CHECK(numeric_rank(w, 1e-9).rank == numeric_rank(lm, 1e-9).rank);
        }
    }

    TEST_CASE("oracle matrix entries ignore the fiber coordinates") {
        FunctionFamily fam = family("monomials3");
        ActionSpec induced = induced_action_oracle(fam);
        PointTuple base = sample_tuple_in(unit_box(1), 4, false, 13, 0);
        PointTuple a = with_fibers(base, {{1.0}, {2.0}, {3.0}, {4.0}});
        PointTuple b = with_fibers(base, {{-9.0}, {0.0}, {123.0}, {-0.5}});
        JointMatrix ma = lie_matrix(induced, a, Backend::Float);
        JointMatrix mb = lie_matrix(induced, b, Backend::Float);
        CHECK(ma.a == mb.a); // bit-identical
    }

    TEST_CASE("independence verdict matches effectiveness of the induced action") {
        SampleCfg cfg;
        struct Case {
            FunctionFamily fam;
            Region region;
        };
        Region pos1;
        pos1.iv = {Interval{0.1, 1.0}};
        std::vector<Case> cases;
        cases.push_back({family("monomials3"), unit_box(1)});
        cases.push_back({family("dependent-pair"), unit_box(1)});
        cases.push_back({bump_family(), pos1});
        cases.push_back({bump_family(), unit_box(1)});
        for (const auto& c : cases) {
            IndependenceReport ind = independence_on_region(c.fam, c.region, cfg);
            ActionSpec induced = induced_action_oracle(c.fam);
            Region lifted = c.region;
            for (int l = 0; l < c.fam.q; ++l) lifted.iv.push_back(Interval{-1.0, 1.0});
            EffectivenessReport eff = effectiveness_on_region(induced, lifted, cfg);
            CHECK((ind.verdict == IndependenceReport::Verdict::Independent) ==
                  (eff.verdict == EffectivenessReport::Verdict::Effective));
            CHECK(ind.max_wronskian_rank == eff.max_rank_found);
        }
    }

    TEST_CASE("region dimension is validated") {
        SampleCfg cfg;
        CHECK_THROWS_AS(independence_on_region(family("monomials3"), unit_box(2), cfg),
                        SpecError);
    }
}
