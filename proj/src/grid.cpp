#include "affsphere/grid.hpp"

#include <cmath>

#include "affsphere/quadrature.hpp"

namespace affsphere {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

void validate(const CurvePair& pair, const GridSpec& spec) {
    if (spec.ns < 2 || spec.nt < 2)
        fail(ErrorKind::Config, "grid resolution must be at least 2 per axis");
    if (spec.quad_tol <= 0.0)
        fail(ErrorKind::Config, "quad_tol must be positive");
    const Interval ds = pair.alpha.domain(), dt = pair.beta.domain();
    if (!ds.contains(spec.window.s_lo) || !ds.contains(spec.window.s_hi) ||
        !dt.contains(spec.window.t_lo) || !dt.contains(spec.window.t_hi))
        fail(ErrorKind::Config, "grid window exceeds the curve domains");
}

// Base-row g values: cumulative s-leg integrals along t = t0.
std::vector<double> base_row_g(const CurvePair& pair, const std::vector<double>& s,
                               double tol) {
    std::vector<double> g0(s.size());
    auto gs = [&](double u) { return g_partials(pair, u, pair.t0).first; };
    g0[0] = pair.g_base + integrate(gs, pair.s0, s[0], tol);
    for (size_t i = 1; i < s.size(); ++i)
        g0[i] = g0[i - 1] + integrate(gs, s[i - 1], s[i], tol);
    return g0;
}

// One grid column: cumulative t-leg from the base parameter, then full records.
void fill_column(const CurvePair& pair, SurfaceGrid& grid, int i, double g_row0,
                 double tol) {
    const double si = grid.s_values[static_cast<size_t>(i)];
    auto gt = [&](double v) { return g_partials(pair, si, v).second; };
    double g = g_row0 + integrate(gt, pair.t0, grid.t_values[0], tol);
    grid.at(i, 0) = sample_with_g(pair, si, grid.t_values[0], g);
    for (int j = 1; j < grid.spec.nt; ++j) {
        g += integrate(gt, grid.t_values[static_cast<size_t>(j - 1)],
                       grid.t_values[static_cast<size_t>(j)], tol);
        grid.at(i, j) = sample_with_g(pair, si, grid.t_values[static_cast<size_t>(j)], g);
    }
}

}  // namespace

SurfaceGrid evaluate_grid_serial(const CurvePair& pair, const GridSpec& spec) {
    validate(pair, spec);
    SurfaceGrid grid;
    grid.spec = spec;
    grid.s_values = linspace(spec.window.s_lo, spec.window.s_hi, spec.ns);
    grid.t_values = linspace(spec.window.t_lo, spec.window.t_hi, spec.nt);
    grid.samples.resize(static_cast<size_t>(spec.ns) * static_cast<size_t>(spec.nt));
    const double tol = 0.5 * spec.quad_tol;
    const std::vector<double> g0 = base_row_g(pair, grid.s_values, tol);
    for (int i = 0; i < spec.ns; ++i)
        fill_column(pair, grid, i, g0[static_cast<size_t>(i)], tol);
    return grid;
}

SurfaceGrid evaluate_grid(const CurvePair& pair, const GridSpec& spec, Exec exec) {
    if (exec == Exec::Serial) return evaluate_grid_serial(pair, spec);
    validate(pair, spec);
    SurfaceGrid grid;
    grid.spec = spec;
    grid.s_values = linspace(spec.window.s_lo, spec.window.s_hi, spec.ns);
    grid.t_values = linspace(spec.window.t_lo, spec.window.t_hi, spec.nt);
    grid.samples.resize(static_cast<size_t>(spec.ns) * static_cast<size_t>(spec.nt));
    const double tol = 0.5 * spec.quad_tol;
    const std::vector<double> g0 = base_row_g(pair, grid.s_values, tol);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.ns; ++i)
        fill_column(pair, grid, i, g0[static_cast<size_t>(i)], tol);
    return grid;
}

std::vector<double> sample_field_serial(const std::function<double(double, double)>& f,
                                        const Window& window, int ns, int nt) {
    std::vector<double> out(static_cast<size_t>(ns) * static_cast<size_t>(nt));
    for (int i = 0; i < ns; ++i) {
        const double s = window.s_lo + (window.s_hi - window.s_lo) * i / (ns - 1);
        for (int j = 0; j < nt; ++j) {
            const double t = window.t_lo + (window.t_hi - window.t_lo) * j / (nt - 1);
            out[static_cast<size_t>(i) * static_cast<size_t>(nt) +
                static_cast<size_t>(j)] = f(s, t);
        }
    }
    return out;
}

std::vector<double> sample_field(const std::function<double(double, double)>& f,
                                 const Window& window, int ns, int nt, Exec exec) {
    if (exec == Exec::Serial) return sample_field_serial(f, window, ns, nt);
    std::vector<double> out(static_cast<size_t>(ns) * static_cast<size_t>(nt));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < ns; ++i) {
        const double s = window.s_lo + (window.s_hi - window.s_lo) * i / (ns - 1);
        for (int j = 0; j < nt; ++j) {
            const double t = window.t_lo + (window.t_hi - window.t_lo) * j / (nt - 1);
            out[static_cast<size_t>(i) * static_cast<size_t>(nt) +
                static_cast<size_t>(j)] = f(s, t);
        }
    }
    return out;
}

}  // namespace affsphere
