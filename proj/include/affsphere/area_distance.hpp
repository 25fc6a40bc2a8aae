#pragma once

#include "affsphere/curve.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// The generator of everything: a pair of planar curves with a base parameter
// pair and the additive constant of g there.
struct CurvePair {
    PlanarCurve alpha;
    PlanarCurve beta;
    double s0 = 0.0;
    double t0 = 0.0;
    double g_base = 0.0;
};

CurvePair make_pair(PlanarCurve alpha, PlanarCurve beta, double s0, double t0,
                    double g_base = 0.0);

// One evaluated point of the generalized area distance map.
struct SurfaceSample {
    double s = 0.0, t = 0.0;
    Vec2 x;           // chord midpoint
    Vec2 n;           // gradient of g; orthogonal to the chord, half its length
    double g = 0.0;
    double g_s = 0.0;
    double g_t = 0.0;
    double omega = 0.0;  // (1/4)[alpha', beta']
    double a = 0.0;      // cubic coefficient of alpha at s
    double b = 0.0;      // cubic coefficient of beta at t
};

Vec2 midpoint(const CurvePair& pair, double s, double t);
Vec2 half_normal(const CurvePair& pair, double s, double t);

// Closed-form partials of g: ((1/4)[beta-alpha, alpha'], (1/4)[beta-alpha, beta']).
std::pair<double, double> g_partials(const CurvePair& pair, double s, double t);

double omega(const CurvePair& pair, double s, double t);

enum class PathOrder { SLegFirst, TLegFirst };

// g by quadrature of the closed-form partials along an L-shaped path from the
// base. Path independence is a structural identity; the reversed path is kept
// as a test oracle.
double accumulate_g(const CurvePair& pair, double s, double t, double quad_tol = 1e-10,
                    PathOrder order = PathOrder::SLegFirst);

// g increment between two parameter points along an L path (s leg at `from` t,
// then t leg at the target s).
double g_increment(const CurvePair& pair, double s_from, double t_from, double s_to,
                   double t_to, double quad_tol = 1e-10);

// Signed area bounded by the base chord, the two curve arcs and the (s,t)
// chord; equals 2*(g - g_base). Independent oracle for accumulate_g.
double chord_area(const CurvePair& pair, double s, double t, double quad_tol = 1e-10);

// Full record at one parameter point (g by accumulation).
SurfaceSample sample_at(const CurvePair& pair, double s, double t,
                        double quad_tol = 1e-10);

// Record with a caller-provided g (used by grid evaluation).
SurfaceSample sample_with_g(const CurvePair& pair, double s, double t, double g);

}  // namespace affsphere
