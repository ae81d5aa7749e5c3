// Compares the OpenMP max-rank scan kernel against the serial reference on
// the fixture gallery's heaviest cases and verifies the outcomes agree.

#include "jointorbit/rank_scan.hpp"
#include "jointorbit/stabilization.hpp"

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jo = jointorbit;

namespace {

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

struct Case {
    const char* fixture;
    int order;
    long long trials;
    bool exact;
};

void run_case(const Case& c) {
    jo::ActionSpec spec = std::get<jo::ActionSpec>(jo::builtin_fixture(c.fixture));
    jo::SampleCfg cfg;
    cfg.trials = c.trials;
    cfg.seed = 20240229;
    cfg.exact = c.exact;

    const int upper = std::min(spec.r(), c.order * spec.m) + 1; // +1 disables early exit
    const jo::Backend backend = c.exact ? jo::Backend::Exact : jo::Backend::Float;
    jo::TrialEval eval = [&spec, &cfg, &c, backend](std::uint64_t trial)
        -> std::optional<std::pair<int, jo::PointTuple>> {
        jo::PointTuple tup = jo::sample_tuple(spec, c.order, cfg, trial);
        jo::RankReport rep = jo::matrix_rank(jo::lie_matrix(spec, tup, backend), cfg.tol);
        return std::make_pair(rep.rank, std::move(tup));
    };

    auto t0 = std::chrono::steady_clock::now();
    jo::ScanOutcome serial = jo::scan_max_rank_serial(eval, 0, c.trials, upper);
    auto t1 = std::chrono::steady_clock::now();
    jo::ScanOutcome parallel = jo::scan_max_rank(eval, 0, c.trials, upper);
    auto t2 = std::chrono::steady_clock::now();

    const double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::printf("%-8s order %d  %-6s trials %-6lld serial %8.3fs  parallel %8.3fs  speedup %5.2fx  "
                "rank %d  %s\n",
                c.fixture, c.order, c.exact ? "exact" : "float", c.trials, ts, tp,
                tp > 0 ? ts / tp : 0.0, parallel.max_rank,
                serial.same_as(parallel) ? "outcomes-match" : "OUTCOME-MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial kernel\n");
#endif
    run_case({"se2", 2, 20000, false});
    run_case({"se2", 2, 5000, true});
    run_case({"gl3", 5, 2000, true});
    run_case({"gl3", 5, 20000, false});
    run_case({"sim2", 3, 20000, false});
    return 0;
}
