#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "affsphere/types.hpp"

namespace affsphere {

// Position and the first three derivatives of a planar curve at one parameter.
struct CurveJet {
    double param = 0.0;
    Vec2 p;   // position
    Vec2 d1;  // first derivative w.r.t. the curve parameter
    Vec2 d2;
    Vec2 d3;
};

// Immutable planar parametric curve with derivative jets up to order 3.
//
// Backends:
//  - polynomial: one coefficient list per coordinate, ascending degree (exact jets)
//  - analytic:   a callable supplying the full jet (caller provides derivatives)
//  - spline:     quintic interpolation through point samples (C^4 in the interior)
//
// Jet evaluation is a pure function of the parameter; instances are safe to
// share across threads.
class PlanarCurve {
public:
    PlanarCurve() = default;  // empty; jet evaluation fails until assigned

    static PlanarCurve polynomial(std::vector<double> x_coeffs,
                                  std::vector<double> y_coeffs,
                                  Interval domain);
    static PlanarCurve analytic(std::function<CurveJet(double)> jet_fn, Interval domain);
    // Fits a quintic interpolating spline through (u_i, p_i). The u_i must be
    // strictly increasing and there must be at least 6 samples.
    static PlanarCurve spline_fit(const std::vector<double>& u,
                                  const std::vector<Vec2>& points);

    CurveJet jet(double u) const;  // throws ParamOutOfDomain
    Vec2 point(double u) const { return jet(u).p; }
    const Interval& domain() const { return domain_; }

private:
    struct Backend;
    std::shared_ptr<const Backend> backend_;
    Interval domain_;
};

inline CurveJet eval_jet(const PlanarCurve& curve, double u) { return curve.jet(u); }

// a(u) = real cube root of [d1, d2]; negative where the curve bends clockwise.
double cubic_coefficient(const PlanarCurve& curve, double u);
double cubic_coefficient(const CurveJet& jet);

// Signed euclidean curvature [d1,d2]/|d1|^3; throws SingularParameterization
// when |d1| falls below tol.
double euclidean_curvature(const PlanarCurve& curve, double u, double tol = 1e-9);
double euclidean_curvature(const CurveJet& jet, double tol = 1e-9);

// Reparameterizes by affine arc length (cubic_coefficient == 1 after the
// change). Requires [d1,d2] bounded away from zero on the whole domain;
// throws InflectionInDomain otherwise.
PlanarCurve affine_arclength_reparam(const PlanarCurve& curve, double tol = 1e-9);

// Parameters where [d1,d2] crosses zero, refined by bisection to tol.
std::vector<double> find_inflections(const PlanarCurve& curve, double tol = 1e-9);

}  // namespace affsphere
