#include "affsphere/curve.hpp"

#include <unsupported/Eigen/Splines>

#include <algorithm>
#include <cmath>

#include "affsphere/quadrature.hpp"

namespace affsphere {

namespace {

using Spline2d = Eigen::Spline<double, 2, 5>;

// Value of the k-th derivative of sum c[i] u^i, Horner over the tail i >= k.
double poly_deriv(const std::vector<double>& c, double u, int k) {
    double acc = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= k; --i) {
        double coef = c[static_cast<size_t>(i)];
        for (int j = 0; j < k; ++j) coef *= static_cast<double>(i - j);
        acc = acc * u + coef;
    }
    return acc;
}

}  // namespace

struct PlanarCurve::Backend {
    enum class Kind { Polynomial, Analytic, Spline } kind;

    std::vector<double> xc, yc;              // polynomial
    std::function<CurveJet(double)> jet_fn;  // analytic
    Spline2d spline;                         // spline, parameter scaled to [0,1]
    double u_lo = 0.0, u_span = 1.0;

    CurveJet eval(double u) const {
        CurveJet j;
        j.param = u;
        switch (kind) {
            case Kind::Polynomial:
                j.p = {poly_deriv(xc, u, 0), poly_deriv(yc, u, 0)};
                j.d1 = {poly_deriv(xc, u, 1), poly_deriv(yc, u, 1)};
                j.d2 = {poly_deriv(xc, u, 2), poly_deriv(yc, u, 2)};
                j.d3 = {poly_deriv(xc, u, 3), poly_deriv(yc, u, 3)};
                return j;
            case Kind::Analytic:
                j = jet_fn(u);
                j.param = u;
                return j;
            case Kind::Spline: {
                const double w = std::clamp((u - u_lo) / u_span, 0.0, 1.0);
                const auto d = spline.derivatives(w, 3);  // 2 x 4
                const double c1 = 1.0 / u_span;
                j.p = {d(0, 0), d(1, 0)};
                j.d1 = {d(0, 1) * c1, d(1, 1) * c1};
                j.d2 = {d(0, 2) * c1 * c1, d(1, 2) * c1 * c1};
                j.d3 = {d(0, 3) * c1 * c1 * c1, d(1, 3) * c1 * c1 * c1};
                return j;
            }
        }
        return j;
    }
};

PlanarCurve PlanarCurve::polynomial(std::vector<double> x_coeffs,
                                    std::vector<double> y_coeffs, Interval domain) {
    if (x_coeffs.empty() || y_coeffs.empty())
        fail(ErrorKind::Config, "polynomial curve needs at least one coefficient per coordinate");
    if (!(domain.lo < domain.hi))
        fail(ErrorKind::Config, "curve domain must be a nonempty interval");
    auto b = std::make_shared<Backend>();
    b->kind = Backend::Kind::Polynomial;
    b->xc = std::move(x_coeffs);
    b->yc = std::move(y_coeffs);
    PlanarCurve c;
    c.backend_ = std::move(b);
    c.domain_ = domain;
    return c;
}

PlanarCurve PlanarCurve::analytic(std::function<CurveJet(double)> jet_fn, Interval domain) {
    if (!(domain.lo < domain.hi))
        fail(ErrorKind::Config, "curve domain must be a nonempty interval");
    auto b = std::make_shared<Backend>();
    b->kind = Backend::Kind::Analytic;
    b->jet_fn = std::move(jet_fn);
    PlanarCurve c;
    c.backend_ = std::move(b);
    c.domain_ = domain;
    return c;
}

PlanarCurve PlanarCurve::spline_fit(const std::vector<double>& u,
                                    const std::vector<Vec2>& points) {
    const size_t n = u.size();
    if (n != points.size() || n < 6)
        fail(ErrorKind::Config, "spline fit needs >= 6 samples with matching parameters");
    for (size_t i = 1; i < n; ++i)
        if (!(u[i] > u[i - 1]))
            fail(ErrorKind::Config, "spline sample parameters must be strictly increasing");

    const double lo = u.front(), span = u.back() - u.front();
    Eigen::MatrixXd pts(2, static_cast<Eigen::Index>(n));
    Eigen::RowVectorXd params(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        pts(0, static_cast<Eigen::Index>(i)) = points[i].x;
        pts(1, static_cast<Eigen::Index>(i)) = points[i].y;
        params(static_cast<Eigen::Index>(i)) = (u[i] - lo) / span;
    }

    auto b = std::make_shared<Backend>();
    b->kind = Backend::Kind::Spline;
    b->spline = Eigen::SplineFitting<Spline2d>::Interpolate(pts, 5, params);
    b->u_lo = lo;
    b->u_span = span;
    PlanarCurve c;
    c.backend_ = std::move(b);
    c.domain_ = {lo, u.back()};
    return c;
}

CurveJet PlanarCurve::jet(double u) const {
    if (!backend_) fail(ErrorKind::Config, "evaluating an empty curve");
    const double eps = 1e-9 * std::max(1.0, std::abs(domain_.length()));
    if (!domain_.contains(u, eps))
        fail(ErrorKind::ParamOutOfDomain,
             "parameter " + std::to_string(u) + " outside curve domain [" +
                 std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
    return backend_->eval(u);
}

double cubic_coefficient(const CurveJet& jet) { return real_cbrt(det2(jet.d1, jet.d2)); }

double cubic_coefficient(const PlanarCurve& curve, double u) {
    return cubic_coefficient(curve.jet(u));
}

double euclidean_curvature(const CurveJet& jet, double tol) {
    const double speed = jet.d1.norm();
    if (speed < tol)
        fail(ErrorKind::SingularParameterization, "curve speed below tolerance");
    return det2(jet.d1, jet.d2) / (speed * speed * speed);
}

double euclidean_curvature(const PlanarCurve& curve, double u, double tol) {
    return euclidean_curvature(curve.jet(u), tol);
}

namespace {

// d/ds of a(s) = [d1,d2]^{1/3}; uses [d1,d2]' = [d1,d3].
double cubic_coefficient_rate(const CurveJet& j) {
    const double a = cubic_coefficient(j);
    return det2(j.d1, j.d3) / (3.0 * a * a);
}

}  // namespace

PlanarCurve affine_arclength_reparam(const PlanarCurve& curve, double tol) {
    const Interval dom = curve.domain();
    const int scan_n = 1024;
    double prev = 0.0;
    for (int i = 0; i <= scan_n; ++i) {
        const double u = dom.lo + dom.length() * i / scan_n;
        const CurveJet j = curve.jet(u);
        const double d = det2(j.d1, j.d2);
        if (std::abs(d) < tol || (i > 0 && std::signbit(d) != std::signbit(prev)))
            fail(ErrorKind::InflectionInDomain,
                 "cubic coefficient vanishes near u = " + std::to_string(u));
        prev = d;
    }

    auto a_of = [curve](double s) { return cubic_coefficient(curve.jet(s)); };

    // Cumulative sigma(s) on a node grid; a has constant sign, so sigma is
    // strictly monotone.
    const int cells = 1024;
    auto nodes = std::make_shared<std::vector<double>>(cells + 1);
    auto sigma = std::make_shared<std::vector<double>>(cells + 1);
    (*sigma)[0] = 0.0;
    for (int i = 0; i <= cells; ++i)
        (*nodes)[static_cast<size_t>(i)] = dom.lo + dom.length() * i / cells;
    for (int i = 0; i < cells; ++i)
        (*sigma)[static_cast<size_t>(i + 1)] =
            (*sigma)[static_cast<size_t>(i)] +
            integrate(a_of, (*nodes)[static_cast<size_t>(i)],
                      (*nodes)[static_cast<size_t>(i + 1)], 1e-13);

    const bool increasing = sigma->back() > 0.0;
    const Interval new_dom = increasing ? Interval{0.0, sigma->back()}
                                        : Interval{sigma->back(), 0.0};

    auto invert = [curve, nodes, sigma, a_of, increasing](double target) {
        // Bracket on the node table, then Newton with the exact rate a(s).
        size_t lo = 0, hi = nodes->size() - 1;
        auto value_le = [&](size_t i) {
            const double v = (*sigma)[i];
            return increasing ? v <= target : v >= target;
        };
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (value_le(mid)) lo = mid; else hi = mid;
        }
        double s = (*nodes)[lo];
        double base = (*sigma)[lo];
        if ((*sigma)[hi] != (*sigma)[lo]) {
            const double f = (target - (*sigma)[lo]) / ((*sigma)[hi] - (*sigma)[lo]);
            s = (*nodes)[lo] + f * ((*nodes)[hi] - (*nodes)[lo]);
        }
        const Interval cd = curve.domain();
        for (int it = 0; it < 60; ++it) {
            s = cd.clamp(s);
            const double here = base + integrate(a_of, (*nodes)[lo], s, 1e-14);
            const double resid = here - target;
            if (std::abs(resid) < 1e-13 * std::max(1.0, std::abs(target))) break;
            s -= resid / a_of(s);
        }
        return cd.clamp(s);
    };

    auto jet_fn = [curve, invert](double sig) {
        const double s = invert(sig);
        const CurveJet j = curve.jet(s);
        const double a = cubic_coefficient(j);
        const double da = cubic_coefficient_rate(j);
        // a'' would need the fourth curve derivative; difference the exact a'.
        const Interval cd = curve.domain();
        const double h = std::min(1e-5 * std::max(1.0, std::abs(s)),
                                  0.25 * cd.length());
        const double sp2 = cd.clamp(s + h), sm2 = cd.clamp(s - h);
        const double dda = (cubic_coefficient_rate(curve.jet(sp2)) -
                            cubic_coefficient_rate(curve.jet(sm2))) /
                           (sp2 - sm2);
        const double sp = 1.0 / a;
        const double spp = -da / (a * a * a);
        const double sppp = (3.0 * da * da - a * dda) / std::pow(a, 5);
        CurveJet out;
        out.param = sig;
        out.p = j.p;
        out.d1 = j.d1 * sp;
        out.d2 = j.d2 * (sp * sp) + j.d1 * spp;
        out.d3 = j.d3 * (sp * sp * sp) + j.d2 * (3.0 * sp * spp) + j.d1 * sppp;
        return out;
    };
    return PlanarCurve::analytic(jet_fn, new_dom);
}

std::vector<double> find_inflections(const PlanarCurve& curve, double tol) {
    const Interval dom = curve.domain();
    const int n = 2048;
    std::vector<double> out;
    auto f = [&](double u) {
        const CurveJet j = curve.jet(u);
        return det2(j.d1, j.d2);
    };
    double u_prev = dom.lo, f_prev = f(u_prev);
    for (int i = 1; i <= n; ++i) {
        const double u = dom.lo + dom.length() * i / n;
        const double fu = f(u);
        if (f_prev == 0.0) {
            out.push_back(u_prev);
        } else if (fu != 0.0 && std::signbit(fu) != std::signbit(f_prev)) {
            double a = u_prev, b = u, fa = f_prev;
            while (b - a > tol) {
                const double m = 0.5 * (a + b), fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if (std::signbit(fm) == std::signbit(fa)) { a = m; fa = fm; }
                else b = m;
            }
            out.push_back(0.5 * (a + b));
        }
        u_prev = u;
        f_prev = fu;
    }
    if (f_prev == 0.0) out.push_back(u_prev);
    // collapse duplicates from adjacent sample hits
    std::sort(out.begin(), out.end());
    std::vector<double> dedup;
    for (double v : out)
        if (dedup.empty() || v - dedup.back() > std::max(tol, 1e-12)) dedup.push_back(v);
    return dedup;
}

}  // namespace affsphere
