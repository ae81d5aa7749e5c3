#include "jointorbit/rank_scan.hpp"

#include "doctest.h"

using namespace jointorbit;

namespace {

TrialEval lie_trial(const ActionSpec& spec, int n, const SampleCfg& cfg, Backend backend) {
    return [&spec, n, cfg, backend](std::uint64_t trial)
               -> std::optional<std::pair<int, PointTuple>> {
        PointTuple t = sample_tuple(spec, n, cfg, trial);
        try {
            return std::make_pair(matrix_rank(lie_matrix(spec, t, backend), cfg.tol).rank,
                                  std::move(t));
        } catch (const MatrixEvalError&) {
            return std::nullopt;
        }
    };
}

} // namespace

TEST_SUITE("rank_scan") {

    TEST_CASE("parallel kernel reproduces the serial reference exactly") {
        SampleCfg cfg;
        cfg.trials = 200;

        ActionSpec se2 = std::get<ActionSpec>(builtin_fixture("se2"));
        SampleCfg f = cfg;
        f.exact = false;
        auto ev1 = lie_trial(se2, 2, f, Backend::Float);
        // upper bound one above the reachable rank disables early exit
        CHECK(scan_max_rank(ev1, 0, 200, 4).same_as(scan_max_rank_serial(ev1, 0, 200, 4)));
        // with early exit at the true bound
        CHECK(scan_max_rank(ev1, 0, 200, 3).same_as(scan_max_rank_serial(ev1, 0, 200, 3)));

        ActionSpec gl3 = std::get<ActionSpec>(builtin_fixture("gl3"));
        SampleCfg e = cfg;
        e.trials = 64;
        e.exact = true;
        auto ev2 = lie_trial(gl3, 5, e, Backend::Exact);
        CHECK(scan_max_rank(ev2, 0, 64, 9).same_as(scan_max_rank_serial(ev2, 0, 64, 9)));

        ActionSpec polar = std::get<ActionSpec>(builtin_fixture("polar"));
        auto ev3 = lie_trial(polar, 1, f, Backend::Float);
        CHECK(scan_max_rank(ev3, 0, 200, 1).same_as(scan_max_rank_serial(ev3, 0, 200, 1)));
    }

    TEST_CASE("scan handles failing trials") {
        // even trials fail, odd trials give rank equal to trial index mod 3
        TrialEval ev = [](std::uint64_t t) -> std::optional<std::pair<int, PointTuple>> {
            if (t % 2 == 0) return std::nullopt;
            PointTuple p;
            p.pts = {{static_cast<double>(t)}};
            return std::make_pair(static_cast<int>(t % 3), p);
        };
        // odd trials in 0..9 give ranks 1, 0, 2, 1, 0: the max 2 appears once
        ScanOutcome s = scan_max_rank_serial(ev, 0, 10, 100);
        CHECK(s.max_rank == 2);
        CHECK(s.witness_trial == 5);
        CHECK(s.failed_trials == 5);
        CHECK(s.attain_count == 1);
        CHECK(scan_max_rank(ev, 0, 10, 100).same_as(s));
        ScanOutcome all_fail = scan_max_rank_serial(
            [](std::uint64_t) -> std::optional<std::pair<int, PointTuple>> {
                return std::nullopt;
            },
            0, 8, 3);
        CHECK(all_fail.max_rank == -1);
        CHECK(all_fail.failed_trials == 8);
    }

    TEST_CASE("early exit stops at the first saturating trial") {
        TrialEval ev = [](std::uint64_t t) -> std::optional<std::pair<int, PointTuple>> {
            PointTuple p;
            p.pts = {{static_cast<double>(t)}};
            return std::make_pair(t == 7 ? 5 : 2, p);
        };
        ScanOutcome s = scan_max_rank_serial(ev, 0, 100, 5);
        CHECK(s.saturated);
        CHECK(s.trials_run == 8);
        CHECK(s.witness_trial == 7);
        CHECK(scan_max_rank(ev, 0, 100, 5).same_as(s));
    }

    TEST_CASE("merge extends a scan") {
        TrialEval ev = [](std::uint64_t t) -> std::optional<std::pair<int, PointTuple>> {
            PointTuple p;
            p.pts = {{static_cast<double>(t)}};
            return std::make_pair(t >= 10 ? 3 : 1, p);
        };
        ScanOutcome a = scan_max_rank_serial(ev, 0, 10, 99);
        ScanOutcome b = scan_max_rank_serial(ev, 10, 10, 99);
        merge_scan(a, b);
        CHECK(a.max_rank == 3);
        CHECK(a.witness_trial == 10);
        CHECK(a.trials_run == 20);
        CHECK(a.attain_count == 10);
    }

    TEST_CASE("generic rank on the worked fixtures") {
        SampleCfg cfg;
        ActionSpec se2 = std::get<ActionSpec>(builtin_fixture("se2"));
        GenericRankResult r1 = generic_rank(se2, 1, cfg);
        CHECK(r1.rank == 2);
        CHECK(r1.backend == Backend::Exact);
        CHECK(!r1.heuristic);
        GenericRankResult r2 = generic_rank(se2, 2, cfg);
        CHECK(r2.rank == 3);
        CHECK(r2.scan.saturated);

        ActionSpec gl3 = std::get<ActionSpec>(builtin_fixture("gl3"));
        CHECK(generic_rank(gl3, 2, cfg).rank == 4);
        CHECK(generic_rank(gl3, 3, cfg).rank == 6);
        CHECK(generic_rank(gl3, 5, cfg).rank == 8);

        ActionSpec polar = std::get<ActionSpec>(builtin_fixture("polar"));
        GenericRankResult rp = generic_rank(polar, 1, cfg);
        CHECK(rp.rank == 1);
        CHECK(rp.backend == Backend::Float);
        CHECK(rp.heuristic);
    }

    TEST_CASE("the witness re-verifies the reported rank") {
        SampleCfg cfg;
        ActionSpec gl3 = std::get<ActionSpec>(builtin_fixture("gl3"));
        GenericRankResult r = generic_rank(gl3, 4, cfg);
        CHECK(r.rank == 8);
        REQUIRE(r.witness.has_exact());
        CHECK(exact_rank(lie_matrix(gl3, r.witness, Backend::Exact)).rank == 8);
    }

    TEST_CASE("identical runs are bit-identical") {
        SampleCfg cfg;
        cfg.trials = 40;
        ActionSpec sim2 = std::get<ActionSpec>(builtin_fixture("sim2"));
        GenericRankResult a = generic_rank(sim2, 2, cfg);
        GenericRankResult b = generic_rank(sim2, 2, cfg);
        CHECK(a.scan.same_as(b.scan));
        CHECK(a.rank == 4);
    }

    TEST_CASE("a region incompatible with the spec raises NumericError") {
        ActionSpec spec = load_spec_text(R"js({"kind":"action","name":"bad","dim":1,
            "coordinates":["x"],"generators":[["1/(x-x)"]]})js");
        SampleCfg cfg;
        cfg.trials = 8;
        CHECK_THROWS_AS(generic_rank(spec, 1, cfg), NumericError);
    }

    TEST_CASE("generic rank is non-decreasing in the order and bounded") {
        SampleCfg cfg;
        for (const char* name : {"se2", "gl3", "sim2"}) {
            ActionSpec spec = std::get<ActionSpec>(builtin_fixture(name));
            int prev = 0;
            for (int n = 1; n <= 5; ++n) {
                int s = generic_rank(spec, n, cfg).rank;
                CHECK(s >= prev);
                CHECK(s <= std::min(spec.r(), n * spec.m));
                prev = s;
            }
        }
    }

    TEST_CASE("confidence extension reports and extends") {
        SampleCfg cfg;
        cfg.trials = 8;
        ActionSpec se2 = std::get<ActionSpec>(builtin_fixture("se2"));
        bool confident = false;
        GenericRankResult r = generic_rank_confident(se2, 2, cfg, 2, 4, &confident);
        CHECK(r.rank == 3);
        CHECK(confident); // saturation counts as confident
    }
}
