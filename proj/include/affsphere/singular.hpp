#pragma once

#include <vector>

#include "affsphere/area_distance.hpp"
#include "affsphere/contour.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

enum class SingularKind { CuspidalEdge, Swallowtail, Degenerate, Unclassified };

const char* kind_name(SingularKind kind);

struct SingularPoint {
    double s = 0.0, t = 0.0;
    double omega_s = 0.0, omega_t = 0.0;
    Vec2 eta;                 // null direction of dx in the (s,t) plane, unit
    double lambda = 0.0;      // affine tangents satisfy alpha_sigma = -lambda beta_tau
    double lambda_prime = 0.0;  // d lambda / dr, filled where it matters
    double kokubu = 0.0;      // det(eta, gamma'), sign-consistent along the branch
    SingularKind kind = SingularKind::Unclassified;
    Vec2 x_img;               // area-evolute point (chord midpoint)
    Vec3 q_img;
    double r = 0.0;           // unit-speed arc parameter along the branch
};

struct SingularBranch {
    std::vector<SingularPoint> points;
    bool closed = false;
    bool clipped = false;
};

struct SingularSetResult {
    std::vector<SingularBranch> branches;
    int degenerate_seeds = 0;
    bool degenerate_field = false;       // omega vanishes over most of the window
    int classifier_disagreements = 0;    // lambda test vs eta || gamma' test
};

// (omega_s, omega_t) = ((1/4)[alpha'', beta'], (1/4)[alpha', beta'']).
std::pair<double, double> omega_gradient(const CurvePair& pair, double s, double t);

// lambda such that the affine-arc-length tangents are opposite scaled copies;
// +-inf at a single inflection, NaN when both curves inflect.
double lambda_at(const CurvePair& pair, double s, double t);

// Traces {omega = 0} in the window and classifies every branch point.
// Swallowtails are localized by a secondary root solve of lambda(r) - 1 = 0
// along the branch.
SingularSetResult trace_singular_set(const CurvePair& pair, const Window& window,
                                     double step = 1e-3, double tol = 1e-9,
                                     double lambda_tol = 1e-4,
                                     Exec exec = Exec::Parallel);

// Classification pass alone (kinds, lambda, kokubu, swallowtail refinement).
// Returns the number of cross-check disagreements outside the hysteresis band.
int classify(const CurvePair& pair, SingularBranch& branch, double lambda_tol = 1e-4,
             double trace_tol = 1e-9);

struct AreaEvolute {
    std::vector<Vec2> points;
    std::vector<size_t> cusp_indices;   // where kind == Swallowtail
    double max_tangent_angle = 0.0;     // deviation from alpha' at cuspidal edges
};

AreaEvolute area_evolute(const CurvePair& pair, const SingularBranch& branch);

// Euclidean curvature of alpha at s and of beta at t, the latter in the
// orientation opposing alpha'; the two agree exactly when lambda = 1.
std::pair<double, double> euclidean_curvature_check(const CurvePair& pair,
                                                    const SingularPoint& p);

}  // namespace affsphere
