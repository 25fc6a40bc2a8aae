#include "affsphere/symmetry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "affsphere/grid.hpp"
#include "affsphere/quadrature.hpp"
#include "affsphere/singular.hpp"

namespace affsphere {

namespace {

// Rows of the third-order contact system for one curve jet: Q(c) = 0,
// (Q o c)' = 0, (Q o c)'' = 0 acting on (q11, q12, q22, q13, q23, q33).
void contact_rows(const CurveJet& j, Eigen::Matrix<double, 6, 6>& m, int row0) {
    const double x = j.p.x, y = j.p.y;
    const double x1 = j.d1.x, y1 = j.d1.y;
    const double x2 = j.d2.x, y2 = j.d2.y;
    m.row(row0) << x * x, 2.0 * x * y, y * y, 2.0 * x, 2.0 * y, 1.0;
    m.row(row0 + 1) << 2.0 * x * x1, 2.0 * (x1 * y + x * y1), 2.0 * y * y1, 2.0 * x1,
        2.0 * y1, 0.0;
    m.row(row0 + 2) << 2.0 * (x1 * x1 + x * x2),
        2.0 * (x2 * y + 2.0 * x1 * y1 + x * y2), 2.0 * (y1 * y1 + y * y2), 2.0 * x2,
        2.0 * y2, 0.0;
}

Eigen::Matrix<double, 6, 6> contact_matrix(const CurvePair& pair, double s, double t) {
    Eigen::Matrix<double, 6, 6> m;
    contact_rows(pair.alpha.jet(s), m, 0);
    contact_rows(pair.beta.jet(t), m, 3);
    // unit rows make the zero-set test scale invariant
    for (int r = 0; r < 6; ++r) {
        const double n = m.row(r).norm();
        if (n > 0.0) m.row(r) /= n;
    }
    return m;
}

}  // namespace

double aess_determinant(const CurvePair& pair, double s, double t) {
    return contact_matrix(pair, s, t).partialPivLu().determinant();
}

namespace {

Conic null_conic(const CurvePair& pair, double s, double t, double* gap_ratio) {
    const Eigen::Matrix<double, 6, 6> m = contact_matrix(pair, s, t);
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(
        m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (gap_ratio)
        *gap_ratio = sv(5) > 0.0 ? sv(4) / sv(5) : std::numeric_limits<double>::infinity();
    const Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(5);
    return classify_conic({v(0), v(1), v(2), v(3), v(4), v(5)});
}

}  // namespace

Conic aess_conic(const CurvePair& pair, double s, double t, double tol,
                 double* gap_ratio) {
    const double det = aess_determinant(pair, s, t);
    if (std::abs(det) > tol)
        fail(ErrorKind::NotOnE, "contact determinant " + std::to_string(det) +
                                    " not within " + std::to_string(tol));
    const Conic conic = null_conic(pair, s, t, gap_ratio);
    if (conic.kind == Conic::Kind::DegeneratePair)
        fail(ErrorKind::DegenerateConic, "third-order contact conic is a line pair");
    return conic;
}

MidlineRecord midline(const CurvePair& pair, double s, double t) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    MidlineRecord rec;
    rec.s = s;
    rec.t = t;
    rec.point = (ja.p + jb.p) * 0.5;

    const double cross = det2(ja.d1, jb.d1);
    const double scale = ja.d1.norm() * jb.d1.norm();
    if (std::abs(cross) < 1e-12 * std::max(scale, 1e-30)) {
        // parallel tangents: the midline runs along them, unless the two
        // tangent lines are one and the same
        if (std::abs(det2(jb.p - ja.p, ja.d1)) < 1e-12 * std::max(1.0, ja.d1.norm()))
            fail(ErrorKind::CoincidentTangentLines,
                 "tangent lines coincide; midline undefined");
        rec.direction = ja.d1 / ja.d1.norm();
        return rec;
    }
    // alpha + u alpha' = beta + v beta'
    const Vec2 rhs = jb.p - ja.p;
    const double u = det2(rhs, jb.d1) / cross;
    const Vec2 inter = ja.p + ja.d1 * u;
    rec.tangent_intersection = inter;
    const Vec2 d = inter - rec.point;
    const double dn = d.norm();
    rec.direction = dn > 1e-13 ? d / dn : ja.d1 / ja.d1.norm();
    return rec;
}

namespace {

struct Residual3 {
    Eigen::Vector3d r;
    Eigen::Matrix<double, 3, 4> jac;
};

Residual3 aass_residual(const CurvePair& pair, const Eigen::Vector4d& z,
                        double quad_tol) {
    const CurveJet a1 = pair.alpha.jet(z(0));
    const CurveJet b1 = pair.beta.jet(z(1));
    const CurveJet a2 = pair.alpha.jet(z(2));
    const CurveJet b2 = pair.beta.jet(z(3));
    const Vec2 x1 = (a1.p + b1.p) * 0.5;
    const Vec2 x2 = (a2.p + b2.p) * 0.5;
    const double g1 = accumulate_g(pair, z(0), z(1), quad_tol);
    const double g2 = accumulate_g(pair, z(2), z(3), quad_tol);
    Residual3 out;
    out.r << x1.x - x2.x, x1.y - x2.y, g1 - g2;
    const auto [gs1, gt1] = g_partials(pair, z(0), z(1));
    const auto [gs2, gt2] = g_partials(pair, z(2), z(3));
    out.jac << 0.5 * a1.d1.x, 0.5 * b1.d1.x, -0.5 * a2.d1.x, -0.5 * b2.d1.x,
        0.5 * a1.d1.y, 0.5 * b1.d1.y, -0.5 * a2.d1.y, -0.5 * b2.d1.y,
        gs1, gt1, -gs2, -gt2;
    return out;
}

bool in_window(const Window& w, const Eigen::Vector4d& z, double margin = 0.0) {
    return w.contains(z(0), z(1), margin) && w.contains(z(2), z(3), margin);
}

double separation(const Eigen::Vector4d& z) {
    return std::hypot(z(0) - z(2), z(1) - z(3));
}

// Min-norm Gauss-Newton onto the 3-equation solution curve.
bool gauss_newton(const CurvePair& pair, const AassOptions& opts, Eigen::Vector4d& z) {
    const double margin =
        0.05 * std::max(opts.window.s_hi - opts.window.s_lo,
                        opts.window.t_hi - opts.window.t_lo);
    for (int it = 0; it < 40; ++it) {
        const Residual3 res = aass_residual(pair, z, opts.quad_tol);
        if (res.r.norm() <= opts.tol) return true;
        const Eigen::Matrix3d jjt = res.jac * res.jac.transpose();
        if (std::abs(jjt.determinant()) < 1e-18) return false;
        z -= res.jac.transpose() * jjt.ldlt().solve(res.r);
        if (!in_window(opts.window, z, margin)) return false;
    }
    return false;
}

Eigen::Vector4d curve_tangent(const Residual3& res) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(res.jac, Eigen::ComputeFullV);
    return svd.matrixV().col(3);
}

// Corrector keeping the predictor's arclength plane.
bool correct(const CurvePair& pair, const AassOptions& opts, Eigen::Vector4d& z,
             const Eigen::Vector4d& tangent) {
    for (int it = 0; it < 12; ++it) {
        const Residual3 res = aass_residual(pair, z, opts.quad_tol);
        if (res.r.norm() <= opts.tol) return true;
        Eigen::Matrix4d a;
        a.topRows<3>() = res.jac;
        a.row(3) = tangent.transpose();
        Eigen::Vector4d rhs;
        rhs << -res.r, 0.0;
        const Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
        if (!lu.isInvertible()) return false;
        z += lu.solve(rhs);
    }
    return false;
}

ChordPairSolution make_solution(const CurvePair& pair, const Eigen::Vector4d& z,
                                double quad_tol) {
    ChordPairSolution sol;
    sol.s1 = z(0);
    sol.t1 = z(1);
    sol.s2 = z(2);
    sol.t2 = z(3);
    const Vec2 x1 = midpoint(pair, z(0), z(1));
    const Vec2 x2 = midpoint(pair, z(2), z(3));
    sol.midpoint = (x1 + x2) * 0.5;
    const double g1 = accumulate_g(pair, z(0), z(1), quad_tol);
    const double g2 = accumulate_g(pair, z(2), z(3), quad_tol);
    sol.g_val = 0.5 * (g1 + g2);
    sol.residual = (x1 - x2).norm() + std::abs(g1 - g2);
    sol.separation = separation(z);
    return sol;
}

}  // namespace

AassResult aass_solve(const CurvePair& pair, const AassOptions& opts, Exec exec) {
    AassResult result;
    const int n = opts.seed_grid;
    if (n < 4) fail(ErrorKind::Config, "AASS seed grid must be at least 4 per axis");
    const double sep_min = opts.separation_factor * opts.step;

    // node tables: curve points and g on the marginal grid
    GridSpec gspec{opts.window, n, n, opts.quad_tol};
    const SurfaceGrid table = evaluate_grid(pair, gspec, exec);

    // 4-D scan over canonical index pairs; keep the best residuals
    struct Seed {
        double residual;
        int i, j, k, l;
    };
    const size_t n2 = static_cast<size_t>(n) * static_cast<size_t>(n);
    std::vector<std::vector<Seed>> per_row(n2);
    auto scan_row = [&](int a) {
        const int i = a / n, j = a % n;
        const SurfaceSample& p1 = table.at(i, j);
        std::vector<Seed>& out = per_row[static_cast<size_t>(a)];
        for (int k = i; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (k == i && l <= j) continue;
                const SurfaceSample& p2 = table.at(k, l);
                const double sep = std::hypot(p1.s - p2.s, p1.t - p2.t);
                if (sep <= sep_min) continue;
                const double res = (p1.x - p2.x).norm() + std::abs(p1.g - p2.g);
                out.push_back({res, i, j, k, l});
            }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int a = 0; a < static_cast<int>(n2); ++a) scan_row(a);
    } else {
        for (int a = 0; a < static_cast<int>(n2); ++a) scan_row(a);
    }
    std::vector<Seed> seeds;
    for (auto& row : per_row) {
        seeds.insert(seeds.end(), row.begin(), row.end());
        row.clear();
    }
    const size_t keep = std::min<size_t>(seeds.size(), 4000);
    std::partial_sort(seeds.begin(), seeds.begin() + static_cast<long>(keep),
                      seeds.end(), [](const Seed& a, const Seed& b) {
                          if (a.residual != b.residual) return a.residual < b.residual;
                          return std::tie(a.i, a.j, a.k, a.l) <
                                 std::tie(b.i, b.j, b.k, b.l);
                      });
    seeds.resize(keep);

    auto near_branches = [&](const Eigen::Vector4d& z) {
        for (const auto& branch : result.branches)
            for (const ChordPairSolution& p : branch) {
                const double d = std::hypot(std::hypot(p.s1 - z(0), p.t1 - z(1)),
                                            std::hypot(p.s2 - z(2), p.t2 - z(3)));
                const double dsw = std::hypot(std::hypot(p.s1 - z(2), p.t1 - z(3)),
                                              std::hypot(p.s2 - z(0), p.t2 - z(1)));
                if (std::min(d, dsw) < 4.0 * opts.step) return true;
            }
        return false;
    };

    auto trace_direction = [&](Eigen::Vector4d z, Eigen::Vector4d dir,
                               std::vector<ChordPairSolution>& out) {
        for (int k = 0; k < opts.max_points; ++k) {
            double h = opts.step;
            bool ok = false;
            Eigen::Vector4d next;
            for (int attempt = 0; attempt < 6 && !ok; ++attempt, h *= 0.5) {
                next = z + h * dir;
                ok = correct(pair, opts, next, dir);
                if (ok && (next - z).norm() > 3.0 * opts.step) ok = false;
            }
            if (!ok) {
                if (h < opts.step / 16.0) result.stalled = true;
                return;
            }
            if (!in_window(opts.window, next) || separation(next) <= sep_min) return;
            out.push_back(make_solution(pair, next, opts.quad_tol));
            Eigen::Vector4d dn = curve_tangent(aass_residual(pair, next, opts.quad_tol));
            if (dn.dot(dir) < 0.0) dn = -dn;
            dir = dn;
            z = next;
        }
    };

    for (const Seed& seed : seeds) {
        Eigen::Vector4d z;
        z << table.s_values[static_cast<size_t>(seed.i)],
            table.t_values[static_cast<size_t>(seed.j)],
            table.s_values[static_cast<size_t>(seed.k)],
            table.t_values[static_cast<size_t>(seed.l)];
        if (near_branches(z)) continue;
        if (!gauss_newton(pair, opts, z)) continue;
        if (!in_window(opts.window, z) || separation(z) <= sep_min) continue;
        if (near_branches(z)) continue;

        const Eigen::Vector4d tangent = curve_tangent(aass_residual(pair, z, opts.quad_tol));
        std::vector<ChordPairSolution> fwd, bwd;
        trace_direction(z, tangent, fwd);
        trace_direction(z, -tangent, bwd);
        std::vector<ChordPairSolution> branch;
        branch.reserve(bwd.size() + 1 + fwd.size());
        branch.insert(branch.end(), bwd.rbegin(), bwd.rend());
        branch.push_back(make_solution(pair, z, opts.quad_tol));
        branch.insert(branch.end(), fwd.begin(), fwd.end());
        if (branch.size() < 3) continue;
        result.branches.push_back(std::move(branch));
    }
    return result;
}

double aass_tangent_angle(const CurvePair& pair, const ChordPairSolution& sol,
                          const ChordPairSolution& neighbor) {
    const Vec2 secant = neighbor.midpoint - sol.midpoint;
    const Vec2 chord_dir = pair.alpha.point(sol.s1) - pair.alpha.point(sol.s2);
    const double sn = secant.norm(), cn = chord_dir.norm();
    if (sn < 1e-15 || cn < 1e-15) return 0.0;
    const double sine = std::abs(det2(secant / sn, chord_dir / cn));
    return std::asin(std::min(1.0, sine));
}

AessResult local_symmetry_points(const CurvePair& pair, const Window& window,
                                 double tol, double step, Exec exec) {
    const double h = 1e-6 * std::max(window.s_hi - window.s_lo,
                                     window.t_hi - window.t_lo);
    ScalarField field{
        [&pair](double s, double t) { return aess_determinant(pair, s, t); },
        [&pair, h](double s, double t) {
            const double fs = (aess_determinant(pair, s + h, t) -
                               aess_determinant(pair, s - h, t)) /
                              (2.0 * h);
            const double ft = (aess_determinant(pair, s, t + h) -
                               aess_determinant(pair, s, t - h)) /
                              (2.0 * h);
            return std::make_pair(fs, ft);
        }};
    TraceOptions opts;
    opts.window = window;
    opts.step = step;
    opts.tol = tol;
    const TraceResult traced = trace_zero_set(field, opts, exec);

    AessResult result;
    result.degenerate_e = traced.degenerate_field;
    result.degenerate_seeds = traced.degenerate_seeds;
    for (const TracedBranch& tb : traced.branches) {
        std::vector<LocalSymmetryPoint> branch;
        branch.reserve(tb.points.size());
        for (const Vec2& z : tb.points) {
            LocalSymmetryPoint p;
            p.s = z.x;
            p.t = z.y;
            p.conic = null_conic(pair, z.x, z.y, nullptr);
            try {
                p.line = midline(pair, z.x, z.y);
            } catch (const Error&) {
                p.line.s = z.x;
                p.line.t = z.y;
                p.line.point = midpoint(pair, z.x, z.y);
            }
            // meeting the singular set is resolved at trace resolution
            const auto [os, ot] = omega_gradient(pair, z.x, z.y);
            const double flag_tol =
                std::max(1e-6, 3.0 * step * std::hypot(os, ot));
            p.on_singular_set = std::abs(omega(pair, z.x, z.y)) < flag_tol;
            branch.push_back(std::move(p));
        }
        result.branches.push_back(std::move(branch));
    }
    return result;
}

}  // namespace affsphere
