// Benchmark: serial vs parallel grid evaluation of a transform workload.
// Prints per-mode wall time, speedup, and the max |serial - parallel|
// difference (expected to be exactly zero: both modes run identical
// per-point code).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "frex/funcmodel.hpp"
#include "frex/grid_eval.hpp"
#include "frex/quad.hpp"
#include "frex/transforms.hpp"

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = 96;
    if (argc > 1) n = std::max(8, std::atoi(argv[1]));

    const auto* e = frex::find_entry("exp_decay");
    frex::QuadConfig cfg;
    const auto grid = frex::Grid::logarithmic(0.05, 50.0, static_cast<std::size_t>(n));

    const auto work = [&](double x) {
        // A beefy per-point job: cosine transform plus an even half-line
        // Hilbert transform evaluation.
        const double a = frex::cosine_transform(e->f, x, cfg).value;
        const double b =
            frex::hilbert(e->Fc_closed ? *e->Fc_closed : e->f, x,
                          frex::HilbertForm::EvenHalfLine, cfg)
                .value;
        return a + b;
    };

    // Warm-up pass so first-touch costs don't skew the serial timing.
    (void)frex::eval_grid(std::vector<double>(grid.points.begin(), grid.points.begin() + 4),
                          work, frex::Exec::Serial);

    const double t0 = now_seconds();
    const auto serial = frex::eval_grid(grid.points, work, frex::Exec::Serial);
    const double t1 = now_seconds();
    const auto parallel = frex::eval_grid(grid.points, work, frex::Exec::Parallel);
    const double t2 = now_seconds();

    double max_diff = 0.0;
    for (std::size_t i = 0; i < serial.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(serial[i] - parallel[i]));

    const double ts = t1 - t0, tp = t2 - t1;
    std::printf("points:            %d\n", n);
    std::printf("threads available: %d\n", frex::max_threads());
    std::printf("serial:            %.3f s\n", ts);
    std::printf("parallel:          %.3f s\n", tp);
    std::printf("speedup:           %.2fx\n", tp > 0 ? ts / tp : 0.0);
    std::printf("max |diff|:        %.3g\n", max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
