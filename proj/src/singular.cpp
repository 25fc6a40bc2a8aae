#include "affsphere/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affsphere/quadrature.hpp"

namespace affsphere {

const char* kind_name(SingularKind kind) {
    switch (kind) {
        case SingularKind::CuspidalEdge: return "CuspidalEdge";
        case SingularKind::Swallowtail: return "Swallowtail";
        case SingularKind::Degenerate: return "Degenerate";
        case SingularKind::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

std::pair<double, double> omega_gradient(const CurvePair& pair, double s, double t) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    return {0.25 * det2(ja.d2, jb.d1), 0.25 * det2(ja.d1, jb.d2)};
}

namespace {

// alpha' = rho * beta' at a singular point; ratio from the largest component.
double parallel_ratio(const CurveJet& ja, const CurveJet& jb) {
    if (std::abs(jb.d1.x) >= std::abs(jb.d1.y)) return ja.d1.x / jb.d1.x;
    return ja.d1.y / jb.d1.y;
}

}  // namespace

double lambda_at(const CurvePair& pair, double s, double t) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    const double a = cubic_coefficient(ja);
    const double b = cubic_coefficient(jb);
    const double rho = parallel_ratio(ja, jb);
    return -(b / a) * rho;
}

std::pair<double, double> euclidean_curvature_check(const CurvePair& pair,
                                                    const SingularPoint& p) {
    const CurveJet ja = pair.alpha.jet(p.s);
    const CurveJet jb = pair.beta.jet(p.t);
    const double k1 = euclidean_curvature(ja);
    const double sign_rho = parallel_ratio(ja, jb) >= 0.0 ? 1.0 : -1.0;
    const double k2 = -sign_rho * euclidean_curvature(jb);
    return {k1, k2};
}

namespace {

constexpr double kRegularityTol = 1e-6;  // curve-speed floor for classification
constexpr double kGradientTol = 1e-7;    // non-degeneracy of (omega_s, omega_t)

ScalarField omega_field(const CurvePair& pair) {
    return {[&pair](double s, double t) { return omega(pair, s, t); },
            [&pair](double s, double t) { return omega_gradient(pair, s, t); }};
}

// Projects z onto {omega = 0}; assumes a non-degenerate start.
bool project(const CurvePair& pair, Vec2& z, double tol) {
    for (int it = 0; it < 50; ++it) {
        const double f = omega(pair, z.x, z.y);
        if (std::abs(f) <= tol) return true;
        const auto [fs, ft] = omega_gradient(pair, z.x, z.y);
        const double g2 = fs * fs + ft * ft;
        if (g2 < kGradientTol * kGradientTol) return false;
        z.x -= f * fs / g2;
        z.y -= f * ft / g2;
    }
    return false;
}

SingularPoint make_point(const CurvePair& pair, const Vec2& z) {
    SingularPoint p;
    p.s = z.x;
    p.t = z.y;
    std::tie(p.omega_s, p.omega_t) = omega_gradient(pair, z.x, z.y);
    const CurveJet ja = pair.alpha.jet(z.x);
    const CurveJet jb = pair.beta.jet(z.y);
    p.x_img = (ja.p + jb.p) * 0.5;
    // eta solves eta1*alpha' + eta2*beta' = 0; written without a, b so single
    // inflections stay well defined.
    const double rho = parallel_ratio(ja, jb);
    Vec2 eta{jb.d1.norm(), -(rho >= 0.0 ? 1.0 : -1.0) * ja.d1.norm()};
    const double en = eta.norm();
    p.eta = en > 0.0 ? eta / en : Vec2{0.0, 0.0};
    p.lambda = lambda_at(pair, z.x, z.y);
    return p;
}

// Walks the branch accumulating g incrementally (the first point pays the
// full L-path from the base).
void fill_branch_geometry(const CurvePair& pair, SingularBranch& branch,
                          double quad_tol) {
    double g = 0.0, r = 0.0;
    for (size_t i = 0; i < branch.points.size(); ++i) {
        SingularPoint& p = branch.points[i];
        if (i == 0) {
            g = accumulate_g(pair, p.s, p.t, quad_tol);
        } else {
            const SingularPoint& q = branch.points[i - 1];
            g += g_increment(pair, q.s, q.t, p.s, p.t, quad_tol);
            r += std::hypot(p.s - q.s, p.t - q.t);
        }
        p.q_img = Vec3(p.x_img, g);
        p.r = r;
    }
}

// lambda at an arc offset dr from the branch point with index i (projected
// back onto the singular set).
bool lambda_at_offset(const CurvePair& pair, const SingularBranch& branch, size_t i,
                      double dr, double trace_tol, double& lambda_out,
                      Vec2* z_out = nullptr) {
    const SingularPoint& p = branch.points[i];
    const auto [fs, ft] = omega_gradient(pair, p.s, p.t);
    Vec2 dir{-ft, fs};
    const double n = dir.norm();
    if (n == 0.0) return false;
    dir = dir / n;
    // orient along increasing r
    if (i + 1 < branch.points.size()) {
        const Vec2 fwd{branch.points[i + 1].s - p.s, branch.points[i + 1].t - p.t};
        if (dir.dot(fwd) < 0.0) dir = dir * -1.0;
    } else if (i > 0) {
        const Vec2 fwd{p.s - branch.points[i - 1].s, p.t - branch.points[i - 1].t};
        if (dir.dot(fwd) < 0.0) dir = dir * -1.0;
    }
    Vec2 z{p.s + dr * dir.x, p.t + dr * dir.y};
    if (!project(pair, z, trace_tol)) return false;
    if (!pair.alpha.domain().contains(z.x) || !pair.beta.domain().contains(z.y))
        return false;
    lambda_out = lambda_at(pair, z.x, z.y);
    if (z_out) *z_out = z;
    return true;
}

bool classifiable(const CurvePair& pair, const SingularPoint& p) {
    const CurveJet ja = pair.alpha.jet(p.s);
    const CurveJet jb = pair.beta.jet(p.t);
    if (ja.d1.norm() < kRegularityTol || jb.d1.norm() < kRegularityTol) return false;
    return std::hypot(p.omega_s, p.omega_t) >= kGradientTol;
}

}  // namespace

int classify(const CurvePair& pair, SingularBranch& branch, double lambda_tol,
             double trace_tol) {
    const size_t n = branch.points.size();
    if (n == 0) return 0;

    // discrete unit tangents along the branch, then sign-consistent eta
    std::vector<Vec2> tangents(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t i0 = (i == 0) ? 0 : i - 1;
        const size_t i1 = (i + 1 < n) ? i + 1 : i;
        Vec2 d{branch.points[i1].s - branch.points[i0].s,
               branch.points[i1].t - branch.points[i0].t};
        const double dn = d.norm();
        tangents[i] = dn > 0.0 ? d / dn : Vec2{0.0, 0.0};
    }
    for (size_t i = 0; i < n; ++i) {
        SingularPoint& p = branch.points[i];
        if (i > 0 && p.eta.dot(branch.points[i - 1].eta) < 0.0) p.eta = p.eta * -1.0;
        p.kokubu = det2(p.eta, tangents[i]);
    }

    // primary lambda test
    for (size_t i = 0; i < n; ++i) {
        SingularPoint& p = branch.points[i];
        if (!classifiable(pair, p)) {
            p.kind = SingularKind::Degenerate;
            continue;
        }
        if (!std::isfinite(p.lambda) || std::abs(p.lambda - 1.0) > lambda_tol) {
            p.kind = SingularKind::CuspidalEdge;
        } else {
            p.kind = SingularKind::Unclassified;  // resolved below via lambda'
        }
    }

    const double step = n > 1 ? std::max(1e-12, (branch.points.back().r -
                                                 branch.points.front().r) /
                                                    static_cast<double>(n - 1))
                              : 1e-3;
    const double lp_tol = 1e-6;

    auto resolve_swallowtail = [&](size_t i, double dr_root) {
        // refine the root of lambda(r) - 1 between r_i and r_i + dr_root by
        // bisection on the projected branch
        double lo = 0.0, hi = dr_root;
        double f_lo = branch.points[i].lambda - 1.0;
        if (!std::isfinite(f_lo)) return;
        for (int it = 0; it < 60 && std::abs(hi - lo) > 1e-11; ++it) {
            const double mid = 0.5 * (lo + hi);
            double lam;
            if (!lambda_at_offset(pair, branch, i, mid, trace_tol, lam)) return;
            const double fm = lam - 1.0;
            if ((fm < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        Vec2 z;
        double lam_root;
        if (!lambda_at_offset(pair, branch, i, root, trace_tol, lam_root, &z)) return;
        // a jump of lambda through infinity (an inflection on the branch) also
        // flips the sign of lambda - 1; only a genuine crossing qualifies
        if (!(std::abs(lam_root - 1.0) < 1e-2)) return;
        // lambda' by centered differences with Richardson extrapolation
        auto slope = [&](double h) {
            double lp, lm;
            Vec2 zp = z, zm = z;
            const auto [fs, ft] = omega_gradient(pair, z.x, z.y);
            Vec2 dir{-ft, fs};
            const double dn = dir.norm();
            if (dn == 0.0) return std::numeric_limits<double>::quiet_NaN();
            dir = dir / dn;
            zp = {z.x + h * dir.x, z.y + h * dir.y};
            zm = {z.x - h * dir.x, z.y - h * dir.y};
            if (!project(pair, zp, trace_tol) || !project(pair, zm, trace_tol))
                return std::numeric_limits<double>::quiet_NaN();
            lp = lambda_at(pair, zp.x, zp.y);
            lm = lambda_at(pair, zm.x, zm.y);
            return (lp - lm) / (2.0 * h);
        };
        const double d1 = slope(step);
        const double d2 = slope(0.5 * step);
        double lprime = std::isfinite(d2) ? (std::isfinite(d1) ? (4.0 * d2 - d1) / 3.0
                                                               : d2)
                                          : d1;
        // overwrite the traced point nearest to the refined location
        const double root_r = branch.points[i].r + root;
        size_t target = i;
        for (size_t j = i; j < std::min(n, i + 3); ++j)
            if (std::abs(branch.points[j].r - root_r) <
                std::abs(branch.points[target].r - root_r))
                target = j;
        SingularPoint refined = make_point(pair, z);
        refined.r = root_r;
        refined.kokubu = branch.points[target].kokubu;
        refined.q_img = branch.points[target].q_img;
        refined.lambda_prime = lprime;
        refined.kind = (std::isfinite(lprime) && std::abs(lprime) > lp_tol)
                           ? SingularKind::Swallowtail
                           : SingularKind::Unclassified;
        branch.points[target] = refined;
    };

    // in-band points: lambda' decides, then the root solve sharpens the spot
    for (size_t i = 0; i < n; ++i) {
        SingularPoint& p = branch.points[i];
        if (p.kind != SingularKind::Unclassified) continue;
        double lp = 0.0, lm = 0.0;
        if (lambda_at_offset(pair, branch, i, step, trace_tol, lp) &&
            lambda_at_offset(pair, branch, i, -step, trace_tol, lm)) {
            p.lambda_prime = (lp - lm) / (2.0 * step);
            p.kind = std::abs(p.lambda_prime) > lp_tol ? SingularKind::Swallowtail
                                                       : SingularKind::Unclassified;
        }
        if (p.kind == SingularKind::Swallowtail && i > 0 && i + 1 < n) {
            const double f_prev = branch.points[i - 1].lambda - 1.0;
            const double f_next = branch.points[i + 1].lambda - 1.0;
            if (std::isfinite(f_prev) && std::isfinite(f_next) &&
                (f_prev < 0.0) != (f_next < 0.0))
                resolve_swallowtail(i - 1,
                                    branch.points[i + 1].r - branch.points[i - 1].r);
        }
    }

    // sign changes of lambda - 1 between adjacent cuspidal-edge points
    for (size_t i = 0; i + 1 < n; ++i) {
        const SingularPoint& p = branch.points[i];
        const SingularPoint& q = branch.points[i + 1];
        if (p.kind != SingularKind::CuspidalEdge ||
            q.kind != SingularKind::CuspidalEdge)
            continue;
        if (!std::isfinite(p.lambda) || !std::isfinite(q.lambda)) continue;
        const double fp = p.lambda - 1.0, fq = q.lambda - 1.0;
        if ((fp < 0.0) == (fq < 0.0)) continue;
        // lambda is continuous along the branch away from inflections; a huge
        // gap between neighbours is a pole crossing, not a root
        if (std::abs(p.lambda - q.lambda) > 0.5) continue;
        resolve_swallowtail(i, q.r - p.r);
    }

    // cross-check: the eta || gamma' criterion must agree with the lambda test
    int disagreements = 0;
    const double k_tol = 1.5 * lambda_tol;  // |A| ~ (3/2)|lambda-1| near lambda=1
    for (size_t i = 0; i < n; ++i) {
        const SingularPoint& p = branch.points[i];
        if (p.kind == SingularKind::Degenerate || !std::isfinite(p.lambda)) continue;
        const double dl = std::abs(p.lambda - 1.0);
        const double da = std::abs(p.kokubu);
        // hysteresis band: an order of magnitude around each threshold
        if (dl > 0.1 * lambda_tol && dl < 10.0 * lambda_tol) continue;
        if (da > 0.1 * k_tol && da < 10.0 * k_tol) continue;
        if ((dl <= lambda_tol) != (da <= k_tol)) ++disagreements;
    }
    return disagreements;
}

SingularSetResult trace_singular_set(const CurvePair& pair, const Window& window,
                                     double step, double tol, double lambda_tol,
                                     Exec exec) {
    if (!pair.alpha.domain().contains(window.s_lo) ||
        !pair.alpha.domain().contains(window.s_hi) ||
        !pair.beta.domain().contains(window.t_lo) ||
        !pair.beta.domain().contains(window.t_hi))
        fail(ErrorKind::Config, "trace window exceeds the curve domains");

    const ScalarField field = omega_field(pair);
    TraceOptions opts;
    opts.window = window;
    opts.step = step;
    opts.tol = tol;
    opts.degenerate_tol = kGradientTol;
    const TraceResult traced = trace_zero_set(field, opts, exec);

    SingularSetResult result;
    result.degenerate_seeds = traced.degenerate_seeds;
    result.degenerate_field = traced.degenerate_field;
    for (const TracedBranch& tb : traced.branches) {
        SingularBranch branch;
        branch.closed = tb.closed;
        branch.clipped = tb.clipped;
        branch.points.reserve(tb.points.size());
        for (const Vec2& z : tb.points) branch.points.push_back(make_point(pair, z));
        fill_branch_geometry(pair, branch, 1e-12);
        result.classifier_disagreements += classify(pair, branch, lambda_tol, tol);
        result.branches.push_back(std::move(branch));
    }
    return result;
}

AreaEvolute area_evolute(const CurvePair& pair, const SingularBranch& branch) {
    AreaEvolute ev;
    const size_t n = branch.points.size();
    ev.points.reserve(n);
    for (const SingularPoint& p : branch.points) ev.points.push_back(p.x_img);
    for (size_t i = 0; i < n; ++i)
        if (branch.points[i].kind == SingularKind::Swallowtail) ev.cusp_indices.push_back(i);

    // tangent parallelism to alpha' at cuspidal edges, away from the cusps
    auto near_cusp = [&](size_t i) {
        for (size_t c : ev.cusp_indices)
            if (std::llabs(static_cast<long long>(i) - static_cast<long long>(c)) <= 5)
                return true;
        return false;
    };
    for (size_t i = 1; i + 1 < n; ++i) {
        if (branch.points[i].kind != SingularKind::CuspidalEdge || near_cusp(i)) continue;
        const Vec2 sec = ev.points[i + 1] - ev.points[i - 1];
        const double sn = sec.norm();
        if (sn < 1e-14) continue;
        const Vec2 dir = pair.alpha.jet(branch.points[i].s).d1;
        const double dn = dir.norm();
        if (dn < 1e-14) continue;
        const double sine = std::abs(det2(sec / sn, dir / dn));
        ev.max_tangent_angle =
            std::max(ev.max_tangent_angle, std::asin(std::min(1.0, sine)));
    }
    return ev;
}

}  // namespace affsphere
