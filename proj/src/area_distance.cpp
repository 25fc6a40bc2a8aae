#include "affsphere/area_distance.hpp"

#include <cmath>

#include "affsphere/quadrature.hpp"

namespace affsphere {

CurvePair make_pair(PlanarCurve alpha, PlanarCurve beta, double s0, double t0,
                    double g_base) {
    if (!alpha.domain().contains(s0) || !beta.domain().contains(t0))
        fail(ErrorKind::Config, "base parameters must lie inside both curve domains");
    if (!std::isfinite(g_base))
        fail(ErrorKind::Config, "g_base must be finite");
    return CurvePair{std::move(alpha), std::move(beta), s0, t0, g_base};
}

Vec2 midpoint(const CurvePair& pair, double s, double t) {
    return (pair.alpha.point(s) + pair.beta.point(t)) * 0.5;
}

Vec2 half_normal(const CurvePair& pair, double s, double t) {
    return perp(pair.beta.point(t) - pair.alpha.point(s)) * 0.5;
}

std::pair<double, double> g_partials(const CurvePair& pair, double s, double t) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    const Vec2 chord = jb.p - ja.p;
    return {0.25 * det2(chord, ja.d1), 0.25 * det2(chord, jb.d1)};
}

double omega(const CurvePair& pair, double s, double t) {
    return 0.25 * det2(pair.alpha.jet(s).d1, pair.beta.jet(t).d1);
}

double accumulate_g(const CurvePair& pair, double s, double t, double quad_tol,
                    PathOrder order) {
    const double leg_tol = 0.5 * quad_tol;
    if (order == PathOrder::SLegFirst) {
        const double leg_s = integrate(
            [&](double u) { return g_partials(pair, u, pair.t0).first; }, pair.s0, s,
            leg_tol);
        const double leg_t = integrate(
            [&](double v) { return g_partials(pair, s, v).second; }, pair.t0, t,
            leg_tol);
        return pair.g_base + leg_s + leg_t;
    }
    const double leg_t = integrate(
        [&](double v) { return g_partials(pair, pair.s0, v).second; }, pair.t0, t,
        leg_tol);
    const double leg_s = integrate(
        [&](double u) { return g_partials(pair, u, t).first; }, pair.s0, s, leg_tol);
    return pair.g_base + leg_t + leg_s;
}

double g_increment(const CurvePair& pair, double s_from, double t_from, double s_to,
                   double t_to, double quad_tol) {
    const double leg_tol = 0.5 * quad_tol;
    const double leg_s = integrate(
        [&](double u) { return g_partials(pair, u, t_from).first; }, s_from, s_to,
        leg_tol);
    const double leg_t = integrate(
        [&](double v) { return g_partials(pair, s_to, v).second; }, t_from, t_to,
        leg_tol);
    return leg_s + leg_t;
}

double chord_area(const CurvePair& pair, double s, double t, double quad_tol) {
    const double leg_tol = 0.5 * quad_tol;
    const Vec2 a0 = pair.alpha.point(pair.s0);
    const Vec2 b0 = pair.beta.point(pair.t0);
    // 2 * line integral of F = (1/2)(-y, x) along the base chord.
    const double c0 = det2(a0, b0);
    const double arc_b = integrate(
        [&](double v) {
            const CurveJet j = pair.beta.jet(v);
            return det2(j.p, j.d1);
        },
        pair.t0, t, leg_tol);
    const double arc_a = integrate(
        [&](double u) {
            const CurveJet j = pair.alpha.jet(u);
            return det2(j.d1, j.p);
        },
        pair.s0, s, leg_tol);
    const double closing = det2(pair.beta.point(t), pair.alpha.point(s));
    return 0.5 * (c0 + arc_b + arc_a + closing);
}

SurfaceSample sample_with_g(const CurvePair& pair, double s, double t, double g) {
    const CurveJet ja = pair.alpha.jet(s);
    const CurveJet jb = pair.beta.jet(t);
    const Vec2 chord = jb.p - ja.p;
    SurfaceSample r;
    r.s = s;
    r.t = t;
    r.x = (ja.p + jb.p) * 0.5;
    r.n = perp(chord) * 0.5;
    r.g = g;
    r.g_s = 0.25 * det2(chord, ja.d1);
    r.g_t = 0.25 * det2(chord, jb.d1);
    r.omega = 0.25 * det2(ja.d1, jb.d1);
    r.a = cubic_coefficient(ja);
    r.b = cubic_coefficient(jb);
    return r;
}

SurfaceSample sample_at(const CurvePair& pair, double s, double t, double quad_tol) {
    return sample_with_g(pair, s, t, accumulate_g(pair, s, t, quad_tol));
}

}  // namespace affsphere
