#include "affsphere/affine_sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affsphere/quadrature.hpp"

namespace affsphere {

ImmersionPoint immerse_with_g(const CurvePair& pair, double s, double t, double g) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    const Vec2 chord = jb.p - ja.p;

    const double g_s = 0.25 * det2(chord, ja.d1);
    const double g_t = 0.25 * det2(chord, jb.d1);
    const double g_ss = 0.25 * det2(chord, ja.d2);
    const double g_tt = 0.25 * det2(chord, jb.d2);
    const double g_st = 0.25 * det2(jb.d1, ja.d1);

    ImmersionPoint p;
    p.s = s;
    p.t = t;
    p.q = Vec3((ja.p + jb.p) * 0.5, g);
    p.q_s = Vec3(ja.d1 * 0.5, g_s);
    p.q_t = Vec3(jb.d1 * 0.5, g_t);
    p.q_ss = Vec3(ja.d2 * 0.5, g_ss);
    p.q_st = Vec3(0.0, 0.0, g_st);
    p.q_tt = Vec3(jb.d2 * 0.5, g_tt);
    p.nu = Vec3(perp(chord) * (-0.5), 1.0);
    p.L = det3(p.q_s, p.q_t, p.q_ss);
    p.N = det3(p.q_s, p.q_t, p.q_tt);
    p.M = det3(p.q_t, p.q_s, p.q_st);  // M >= 0 orientation
    p.omega = 0.25 * det2(ja.d1, jb.d1);
    p.g_st = g_st;
    p.cubic.a = cubic_coefficient(ja);
    p.cubic.b = cubic_coefficient(jb);
    if (p.M > 0.0 && g_st != 0.0)
        p.xi = p.q_st / std::copysign(std::sqrt(p.M), g_st);
    return p;
}

ImmersionPoint immerse(const CurvePair& pair, double s, double t, double quad_tol) {
    return immerse_with_g(pair, s, t, accumulate_g(pair, s, t, quad_tol));
}

CubicFormCoeffs cubic_form(const CurvePair& pair, double s, double t) {
    return {cubic_coefficient(pair.alpha.jet(s)), cubic_coefficient(pair.beta.jet(t))};
}

SpaceTransform SpaceTransform::translate(Vec2 w, double w3) {
    SpaceTransform T;
    T.kind = Kind::Translate;
    T.w = w;
    T.w3 = w3;
    return T;
}

SpaceTransform SpaceTransform::planar_affine(double a11, double a12, double a21,
                                             double a22, Vec2 v) {
    SpaceTransform T;
    T.kind = Kind::PlanarAffine;
    T.a11 = a11;
    T.a12 = a12;
    T.a21 = a21;
    T.a22 = a22;
    T.v = v;
    return T;
}

SpaceTransform SpaceTransform::make_shear(Vec2 a) {
    SpaceTransform T;
    T.kind = Kind::Shear;
    T.shear = a;
    return T;
}

namespace {

PlanarCurve translate_curve(const PlanarCurve& curve, Vec2 w) {
    return PlanarCurve::analytic(
        [curve, w](double u) {
            CurveJet j = curve.jet(u);
            j.p += w;
            return j;
        },
        curve.domain());
}

PlanarCurve map_curve(const PlanarCurve& curve, const SpaceTransform& T) {
    return PlanarCurve::analytic(
        [curve, T](double u) {
            CurveJet j = curve.jet(u);
            auto apply = [&T](const Vec2& p) {
                return Vec2{T.a11 * p.x + T.a12 * p.y, T.a21 * p.x + T.a22 * p.y};
            };
            j.p = apply(j.p) + T.v;
            j.d1 = apply(j.d1);
            j.d2 = apply(j.d2);
            j.d3 = apply(j.d3);
            return j;
        },
        curve.domain());
}

}  // namespace

CurvePair apply_transform(const CurvePair& pair, const SpaceTransform& T) {
    switch (T.kind) {
        case SpaceTransform::Kind::Translate:
            return CurvePair{translate_curve(pair.alpha, T.w),
                             translate_curve(pair.beta, T.w), pair.s0, pair.t0,
                             pair.g_base + T.w3};
        case SpaceTransform::Kind::PlanarAffine: {
            const double det = T.a11 * T.a22 - T.a12 * T.a21;
            if (std::abs(det) < 1e-12)
                fail(ErrorKind::SingularMatrix, "planar affine matrix is singular");
            return CurvePair{map_curve(pair.alpha, T), map_curve(pair.beta, T),
                             pair.s0, pair.t0, pair.g_base * det};
        }
        case SpaceTransform::Kind::Shear: {
            // The vertical shear z -> z + a.x moves alpha by +a^perp and beta
            // by -a^perp; g at the base picks up a.x(base).
            const Vec2 ap = perp(T.shear);
            const Vec2 x0 = midpoint(pair, pair.s0, pair.t0);
            return CurvePair{translate_curve(pair.alpha, ap),
                             translate_curve(pair.beta, ap * (-1.0)), pair.s0,
                             pair.t0, pair.g_base + T.shear.dot(x0)};
        }
    }
    fail(ErrorKind::Config, "unknown transform kind");
}

Vec3 apply_to_surface(const SpaceTransform& T, const Vec3& q) {
    switch (T.kind) {
        case SpaceTransform::Kind::Translate:
            return {q.x + T.w.x, q.y + T.w.y, q.z + T.w3};
        case SpaceTransform::Kind::PlanarAffine: {
            const double det = T.a11 * T.a22 - T.a12 * T.a21;
            return {T.a11 * q.x + T.a12 * q.y + T.v.x,
                    T.a21 * q.x + T.a22 * q.y + T.v.y, det * q.z};
        }
        case SpaceTransform::Kind::Shear:
            return {q.x, q.y, q.z + T.shear.x * q.x + T.shear.y * q.y};
    }
    fail(ErrorKind::Config, "unknown transform kind");
}

namespace {

struct HessianPointResult {
    double dev = -1.0;  // negative: skipped
};

// Pulls the spatial probe x0 + delta back through the chart.
bool probe_pullback(const CurvePair& pair, double s, double t, const Vec2& target,
                    double& s_out, double& t_out) {
    double si = s, ti = t;
    for (int it = 0; it < 30; ++it) {
        const CurveJet ja = pair.alpha.jet(si);
        const CurveJet jb = pair.beta.jet(ti);
        const Vec2 r = (ja.p + jb.p) * 0.5 - target;
        if (std::abs(r.x) + std::abs(r.y) < 1e-14) break;
        const Vec2 cs = ja.d1 * 0.5, ct = jb.d1 * 0.5;
        const double det = det2(cs, ct);
        if (std::abs(det) < 1e-14) return false;
        // 2x2 solve [cs ct] d = r
        const double ds = (r.x * ct.y - r.y * ct.x) / det;
        const double dt = (cs.x * r.y - cs.y * r.x) / det;
        si -= ds;
        ti -= dt;
        if (!pair.alpha.domain().contains(si, 1e-6) ||
            !pair.beta.domain().contains(ti, 1e-6))
            return false;
    }
    s_out = si;
    t_out = ti;
    return true;
}

HessianPointResult hessian_at(const CurvePair& pair, const SurfaceSample& sample,
                              double h, double jac_tol) {
    HessianPointResult res;
    if (std::abs(sample.omega) < jac_tol) return res;

    const Vec2 x0 = sample.x;
    // g at the 8 neighbours of the FD stencil, pulled back through the chart
    double gv[3][3];
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) {
                gv[1][1] = sample.g;
                continue;
            }
            const Vec2 target{x0.x + di * h, x0.y + dj * h};
            double sp, tp;
            if (!probe_pullback(pair, sample.s, sample.t, target, sp, tp)) return res;
            gv[di + 1][dj + 1] =
                sample.g + g_increment(pair, sample.s, sample.t, sp, tp, 1e-13);
        }
    const double gxx = (gv[2][1] - 2.0 * gv[1][1] + gv[0][1]) / (h * h);
    const double gyy = (gv[1][2] - 2.0 * gv[1][1] + gv[1][0]) / (h * h);
    const double gxy = (gv[2][2] - gv[2][0] - gv[0][2] + gv[0][0]) / (4.0 * h * h);
    res.dev = std::abs(gxx * gyy - gxy * gxy + 1.0);
    return res;
}

}  // namespace

HessianReport hessian_det_check(const CurvePair& pair, const SurfaceGrid& grid,
                                double h, Exec exec) {
    if (h <= 0.0) fail(ErrorKind::Config, "finite-difference step must be positive");
    const double jac_tol = 1e-8;
    const int n = static_cast<int>(grid.samples.size());
    std::vector<HessianPointResult> results(static_cast<size_t>(n));
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < n; ++k)
            results[static_cast<size_t>(k)] =
                hessian_at(pair, grid.samples[static_cast<size_t>(k)], h, jac_tol);
    } else {
        for (int k = 0; k < n; ++k)
            results[static_cast<size_t>(k)] =
                hessian_at(pair, grid.samples[static_cast<size_t>(k)], h, jac_tol);
    }
    HessianReport rep;
    rep.h = h;
    for (int k = 0; k < n; ++k) {
        const auto& r = results[static_cast<size_t>(k)];
        if (r.dev < 0.0) {
            ++rep.skipped_singular;
            continue;
        }
        ++rep.evaluated;
        if (r.dev > rep.max_abs_dev) {
            rep.max_abs_dev = r.dev;
            rep.arg_s = grid.samples[static_cast<size_t>(k)].s;
            rep.arg_t = grid.samples[static_cast<size_t>(k)].t;
        }
    }
    if (rep.evaluated == 0)
        fail(ErrorKind::SingularRegion,
             "chart Jacobian near-singular on the whole grid");
    return rep;
}

GradientGrid GradientGrid::from_surface(const SurfaceGrid& grid) {
    GradientGrid g;
    g.s_values = grid.s_values;
    g.t_values = grid.t_values;
    g.x.reserve(grid.samples.size());
    g.n.reserve(grid.samples.size());
    for (const auto& s : grid.samples) {
        g.x.push_back(s.x);
        g.n.push_back(s.n);
    }
    return g;
}

GradientGrid GradientGrid::from_values(std::vector<double> s_values,
                                       std::vector<double> t_values,
                                       std::vector<Vec2> x,
                                       const std::vector<double>& g) {
    const int ns = static_cast<int>(s_values.size());
    const int nt = static_cast<int>(t_values.size());
    if (ns < 3 || nt < 3)
        fail(ErrorKind::Config, "gradient by differencing needs at least 3x3 samples");
    if (x.size() != static_cast<size_t>(ns) * static_cast<size_t>(nt) ||
        g.size() != x.size())
        fail(ErrorKind::Config, "grid value arrays have inconsistent sizes");
    GradientGrid out;
    out.s_values = std::move(s_values);
    out.t_values = std::move(t_values);
    out.n.resize(x.size());
    out.chart_det.resize(x.size());

    auto idx = [nt](int i, int j) {
        return static_cast<size_t>(i) * static_cast<size_t>(nt) + static_cast<size_t>(j);
    };
    double max_det = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const int i0 = std::max(0, i - 1), i1 = std::min(ns - 1, i + 1);
            const int j0 = std::max(0, j - 1), j1 = std::min(nt - 1, j + 1);
            const double dsv = out.s_values[static_cast<size_t>(i1)] -
                               out.s_values[static_cast<size_t>(i0)];
            const double dtv = out.t_values[static_cast<size_t>(j1)] -
                               out.t_values[static_cast<size_t>(j0)];
            const Vec2 xs = (x[idx(i1, j)] - x[idx(i0, j)]) / dsv;
            const Vec2 xt = (x[idx(i, j1)] - x[idx(i, j0)]) / dtv;
            const double gs = (g[idx(i1, j)] - g[idx(i0, j)]) / dsv;
            const double gt = (g[idx(i, j1)] - g[idx(i, j0)]) / dtv;
            const double det = det2(xs, xt);
            out.chart_det[idx(i, j)] = det;
            max_det = std::max(max_det, std::abs(det));
            if (std::abs(det) < 1e-14) {
                out.n[idx(i, j)] = {std::nan(""), std::nan("")};
                continue;
            }
            // solve n . xs = gs, n . xt = gt
            out.n[idx(i, j)] = {(gs * xt.y - gt * xs.y) / det,
                                (gt * xs.x - gs * xt.x) / det};
        }
    // the chart folds along the singular set; differencing across the fold is
    // meaningless, so poorly conditioned entries are dropped
    for (size_t k = 0; k < out.n.size(); ++k)
        if (std::abs(out.chart_det[k]) < 0.1 * max_det)
            out.n[k] = {std::nan(""), std::nan("")};
    out.x = std::move(x);
    return out;
}

namespace {

double kahan_mean(const std::vector<double>& v) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(v.size());
}

// Averages family(i,j) over j for each i and reports the max deviation from
// the average (skipping NaN entries from degenerate differencing).
double family_profile(const GradientGrid& grid, bool plus, bool average_over_t,
                      std::vector<Vec2>& profile) {
    const int ns = static_cast<int>(grid.s_values.size());
    const int nt = static_cast<int>(grid.t_values.size());
    const int n_outer = average_over_t ? ns : nt;
    const int n_inner = average_over_t ? nt : ns;
    profile.assign(static_cast<size_t>(n_outer), Vec2{});
    double max_dev = 0.0;
    std::vector<double> xs, ys;
    for (int o = 0; o < n_outer; ++o) {
        xs.clear();
        ys.clear();
        for (int in = 0; in < n_inner; ++in) {
            const int i = average_over_t ? o : in;
            const int j = average_over_t ? in : o;
            const Vec2 np = grid.n_at(i, j);
            if (!np.finite()) continue;
            const Vec2 f = plus ? grid.x_at(i, j) + perp(np) : grid.x_at(i, j) - perp(np);
            xs.push_back(f.x);
            ys.push_back(f.y);
        }
        if (xs.empty()) return std::numeric_limits<double>::infinity();
        const Vec2 mean{kahan_mean(xs), kahan_mean(ys)};
        profile[static_cast<size_t>(o)] = mean;
        for (size_t k = 0; k < xs.size(); ++k)
            max_dev = std::max(max_dev,
                               Vec2{xs[k] - mean.x, ys[k] - mean.y}.norm());
    }
    return max_dev;
}

PlanarCurve fit_profile(const std::vector<double>& params,
                        const std::vector<Vec2>& pts) {
    if (params.size() < 6)
        fail(ErrorKind::Config, "curve extraction needs at least 6 grid lines per axis");
    return PlanarCurve::spline_fit(params, pts);
}

}  // namespace

ExtractionResult extract_curves(const GradientGrid& grid, double tol) {
    std::vector<Vec2> alpha_pts, beta_pts;
    // primary assignment: x + n^perp depends on s alone, x - n^perp on t alone
    const double v_plus_t = family_profile(grid, true, true, alpha_pts);
    const double v_minus_s = family_profile(grid, false, false, beta_pts);
    const double primary = std::max(v_plus_t, v_minus_s);
    if (primary <= tol) {
        ExtractionResult res{fit_profile(grid.s_values, alpha_pts),
                             fit_profile(grid.t_values, beta_pts), primary, false};
        return res;
    }
    // opposite orientation: the families swap their free parameters
    std::vector<Vec2> alpha_pts2, beta_pts2;
    const double v_minus_t = family_profile(grid, false, true, alpha_pts2);
    const double v_plus_s = family_profile(grid, true, false, beta_pts2);
    const double swapped = std::max(v_minus_t, v_plus_s);
    if (swapped <= tol) {
        ExtractionResult res{fit_profile(grid.s_values, alpha_pts2),
                             fit_profile(grid.t_values, beta_pts2), swapped, true};
        return res;
    }
    fail(ErrorKind::NotAsymptotic,
         "cross-variation " + std::to_string(std::min(primary, swapped)) +
             " exceeds tolerance " + std::to_string(tol) +
             "; input is not an asymptotic-coordinate grid");
}

}  // namespace affsphere
