// Benchmark of the parallel kernels against their serial references.
// Both paths must agree bitwise; timings compare wall clock.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "affsphere/affine_sphere.hpp"
#include "affsphere/fixtures.hpp"
#include "affsphere/grid.hpp"
#include "affsphere/symmetry.hpp"

using namespace affsphere;

namespace {

double ms_of(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                identical ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("AFFSPHERE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    if (scale < 1) scale = 1;
    const Fixture& fx = fixture("excusp1");
    std::printf("threads: %d, scale: %d\n", omp_get_max_threads(), scale);
    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        const GridSpec spec{{-0.2, 0.2, -0.2, 0.2}, 400 * scale, 400, 1e-10};
        SurfaceGrid a, b;
        const double ts = ms_of([&] { a = evaluate_grid_serial(fx.pair, spec); });
        const double tp = ms_of([&] { b = evaluate_grid(fx.pair, spec, Exec::Parallel); });
        bool same = a.samples.size() == b.samples.size();
        for (size_t i = 0; same && i < a.samples.size(); ++i)
            same = a.samples[i].g == b.samples[i].g && a.samples[i].omega == b.samples[i].omega;
        row("surface grid", ts, tp, same);
    }
    {
        const Window w = fx.default_window;
        auto f = [&](double s, double t) { return omega(fx.pair, s, t); };
        std::vector<double> a, b;
        const double ts = ms_of([&] { a = sample_field_serial(f, w, 1500 * scale, 1500); });
        const double tp = ms_of([&] { b = sample_field(f, w, 1500 * scale, 1500); });
        row("omega field scan", ts, tp, a == b);
    }
    {
        auto f = [&](double s, double t) { return aess_determinant(fx.pair, s, t); };
        const Window w = fx.symmetry_window;
        std::vector<double> a, b;
        const double ts = ms_of([&] { a = sample_field_serial(f, w, 220 * scale, 220); });
        const double tp = ms_of([&] { b = sample_field(f, w, 220 * scale, 220); });
        row("contact determinant scan", ts, tp, a == b);
    }
    {
        const GridSpec spec{{0.05, 0.2, 0.05, 0.2}, 40 * scale, 40, 1e-10};
        const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
        HessianReport a, b;
        const double ts =
            ms_of([&] { a = hessian_det_check(fx.pair, grid, 1e-4, Exec::Serial); });
        const double tp =
            ms_of([&] { b = hessian_det_check(fx.pair, grid, 1e-4, Exec::Parallel); });
        row("hessian verification", ts, tp, a.max_abs_dev == b.max_abs_dev);
    }
    {
        AassOptions opts;
        opts.window = fx.symmetry_window;
        AassResult a, b;
        const double ts = ms_of([&] { a = aass_solve(fx.pair, opts, Exec::Serial); });
        const double tp = ms_of([&] { b = aass_solve(fx.pair, opts, Exec::Parallel); });
        bool same = a.branches.size() == b.branches.size();
        for (size_t i = 0; same && i < a.branches.size(); ++i) {
            same = a.branches[i].size() == b.branches[i].size();
            for (size_t k = 0; same && k < a.branches[i].size(); ++k)
                same = a.branches[i][k].s1 == b.branches[i][k].s1 &&
                       a.branches[i][k].g_val == b.branches[i][k].g_val;
        }
        row("AASS seed scan + trace", ts, tp, same);
    }
    return 0;
}
