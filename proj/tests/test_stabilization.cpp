#include "jointorbit/stabilization.hpp"

#include "doctest.h"

using namespace jointorbit;

namespace {

ActionSpec fixture(const char* name) {
    return std::get<ActionSpec>(builtin_fixture(name));
}

} // namespace

TEST_SUITE("stabilizer") {

    TEST_CASE("se2 stabilizes at order two with dimension three") {
        SampleCfg cfg;
        StabilizationReport rep = stabilize(fixture("se2"), cfg);
        CHECK(rep.s == std::vector<int>{2, 3});
        CHECK(rep.n0 == 2);
        CHECK(rep.s_stab == 3);
        CHECK(rep.invariant_counts == std::vector<int>{0, 1});
        CHECK(rep.bound_ok);
        CHECK(rep.verdict == StabilizationReport::Verdict::Yes);
        CHECK(rep.backend == Backend::Exact);
        CHECK(rep.witnesses.size() == 2);
    }

    TEST_CASE("gl3 stabilizes at order four with dimension eight") {
        SampleCfg cfg;
        cfg.exact = true;
        StabilizationReport rep = stabilize(fixture("gl3"), cfg);
        CHECK(rep.s == std::vector<int>{2, 4, 6, 8});
        CHECK(rep.n0 == 4);
        CHECK(rep.s_stab == 8);
        CHECK(rep.verdict == StabilizationReport::Verdict::No); // 8 < 9
        CHECK(rep.invariant_counts == std::vector<int>{0, 0, 0, 0});
    }

    TEST_CASE("sim2 needs two points") {
        SampleCfg cfg;
        StabilizationReport rep = stabilize(fixture("sim2"), cfg);
        CHECK(rep.s == std::vector<int>{2, 4});
        CHECK(rep.n0 == 2);
        CHECK(rep.verdict == StabilizationReport::Verdict::Yes);
    }

    TEST_CASE("polar stabilizes immediately and is flagged heuristic") {
        SampleCfg cfg;
        StabilizationReport rep = stabilize(fixture("polar"), cfg);
        CHECK(rep.s == std::vector<int>{1});
        CHECK(rep.n0 == 1);
        CHECK(rep.invariant_counts == std::vector<int>{1});
        CHECK(rep.verdict == StabilizationReport::Verdict::Heuristic);
    }

    TEST_CASE("bump grows from one to two") {
        SampleCfg cfg;
        StabilizationReport rep = stabilize(fixture("bump"), cfg);
        CHECK(rep.s == std::vector<int>{1, 2});
        CHECK(rep.n0 == 2);
        CHECK(rep.s_stab == 2);
        CHECK(rep.verdict == StabilizationReport::Verdict::Heuristic);
    }

    TEST_CASE("a single translation on the line is transitive and free") {
        ActionSpec line = load_spec_text(R"js({"kind":"action","name":"shift","dim":1,
            "coordinates":["x"],"generators":[["1"]]})js");
        SampleCfg cfg;
        StabilizationReport rep = stabilize(line, cfg);
        CHECK(rep.s == std::vector<int>{1});
        CHECK(rep.n0 == 1);
        CHECK(rep.verdict == StabilizationReport::Verdict::Yes);
        CHECK(rep.invariant_counts == std::vector<int>{0});
    }

    TEST_CASE("extended mode computes past stabilization") {
        SampleCfg cfg;
        StabilizationReport rep = stabilize(fixture("se2"), cfg, 1);
        REQUIRE(rep.s_extended.size() == 4); // s_1..s_4
        CHECK(rep.s_extended == std::vector<int>{2, 3, 3, 3});
        // two orders further: the plateau continues through n0 + 3
        for (const char* name : {"se2", "sim2", "gl3", "bump"}) {
            StabilizationReport ext = stabilize(fixture(name), cfg, 2);
            REQUIRE(ext.s_extended.size() == static_cast<std::size_t>(ext.n0) + 3);
            CHECK(ext.s_extended[static_cast<std::size_t>(ext.n0)] == ext.s_stab);
            CHECK(ext.s_extended[static_cast<std::size_t>(ext.n0) + 1] == ext.s_stab);
            CHECK(ext.s_extended[static_cast<std::size_t>(ext.n0) + 2] == ext.s_stab);
        }
    }

    TEST_CASE("strict growth before stabilization on every action fixture") {
        SampleCfg cfg;
        for (const char* name : {"se2", "gl3", "sim2", "polar", "bump"}) {
            StabilizationReport rep = stabilize(fixture(name), cfg);
            for (std::size_t k = 0; k + 1 < rep.s.size(); ++k)
                CHECK(rep.s[k + 1] >= rep.s[k] + 1);
            CHECK(rep.n0 <= fixture(name).r() - rep.s[0] + 1);
        }
    }

    TEST_CASE("invariant counts") {
        SampleCfg cfg;
        CHECK(invariant_count(fixture("se2"), 2, cfg) == 1);  // the pairwise distance
        CHECK(invariant_count(fixture("gl3"), 4, cfg) == 0);
        CHECK(invariant_count(fixture("gl3"), 5, cfg) == 2);
        CHECK(invariant_count(fixture("se2"), 1, cfg) == 0);
    }

    TEST_CASE("max orbit membership") {
        SampleCfg cfg;
        ActionSpec se2 = fixture("se2");
        PointTuple diag;
        diag.pts = {{1, 2}, {1, 2}};
        CHECK(!is_max_orbit(se2, diag, cfg));
        PointTuple gen;
        gen.pts = {{0, 0}, {1, 0}};
        CHECK(is_max_orbit(se2, gen, cfg));

        // a trivial action has zero-dimensional orbits everywhere, so every
        // tuple sits on the maximal stratum
        ActionSpec zero = load_spec_text(R"js({"kind":"action","name":"zero","dim":2,
            "coordinates":["x","y"],"generators":[["0","0"]]})js");
        CHECK(is_max_orbit(zero, diag, cfg));
        CHECK(is_max_orbit(zero, gen, cfg));
    }

    TEST_CASE("tuple completion") {
        SampleCfg cfg;
        ActionSpec se2 = fixture("se2");
        StabilizationReport st = stabilize(se2, cfg);
        PointTuple base;
        base.pts = {{0, 0}};
        base.exact = std::vector<std::vector<Rational>>{{Rational(0), Rational(0)}};
        PointTuple full = complete_tuple(se2, base, cfg, &st);
        CHECK(full.order() == st.n0 + 1);
        CHECK(full.pts[0] == std::vector<double>{0, 0});
        Backend b = choose_backend(se2.polynomial, full.has_exact(), cfg.exact);
        CHECK(matrix_rank(lie_matrix(se2, full, b), cfg.tol).rank == st.s_stab);

        ActionSpec gl3 = fixture("gl3");
        StabilizationReport stg = stabilize(gl3, cfg);
        PointTuple fullg = complete_tuple(gl3, base, cfg, &stg);
        CHECK(fullg.order() == 5);
        Backend bg = choose_backend(gl3.polynomial, fullg.has_exact(), cfg.exact);
        CHECK(matrix_rank(lie_matrix(gl3, fullg, bg), cfg.tol).rank == 8);

        ActionSpec polar = fixture("polar");
        StabilizationReport stp = stabilize(polar, cfg);
        PointTuple pbase;
        pbase.pts = {{1, 0}};
        PointTuple fullp = complete_tuple(polar, pbase, cfg, &stp);
        CHECK(fullp.order() == 2);
        CHECK(matrix_rank(lie_matrix(polar, fullp, Backend::Float), cfg.tol).rank == 1);
    }

    TEST_CASE("completion validates its input") {
        SampleCfg cfg;
        ActionSpec se2 = fixture("se2");
        PointTuple two;
        two.pts = {{0, 0}, {1, 1}};
        CHECK_THROWS_AS(complete_tuple(se2, two, cfg), SpecError);
    }
}
