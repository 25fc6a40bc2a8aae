#pragma once

#include <optional>
#include <vector>

#include "affsphere/area_distance.hpp"
#include "affsphere/conic.hpp"
#include "affsphere/contour.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// One self-intersection witness: two distinct chords with equal midpoint and
// equal swept area.
struct ChordPairSolution {
    double s1 = 0.0, t1 = 0.0, s2 = 0.0, t2 = 0.0;
    Vec2 midpoint;
    double g_val = 0.0;
    double residual = 0.0;    // |x1-x2| + |g1-g2| at the solution
    double separation = 0.0;  // |(s1,t1)-(s2,t2)|
};

struct AassOptions {
    Window window;
    int seed_grid = 24;       // per-axis resolution of the 4-D seeding scan
    double tol = 1e-10;       // Gauss-Newton residual target
    double step = 1e-3;       // continuation step in 4-D arc length
    double quad_tol = 1e-12;
    double separation_factor = 10.0;  // diagonal exclusion, in units of step
    int max_points = 20000;
};

struct AassResult {
    std::vector<std::vector<ChordPairSolution>> branches;
    bool stalled = false;  // some continuation gave up before a natural end
};

AassResult aass_solve(const CurvePair& pair, const AassOptions& opts,
                      Exec exec = Exec::Parallel);

// Angle between the secant of consecutive midpoints and the chord direction
// alpha(s1) - alpha(s2). Zero for an exact solution curve.
double aass_tangent_angle(const CurvePair& pair, const ChordPairSolution& sol,
                          const ChordPairSolution& neighbor);

// Determinant of the row-normalized 6x6 third-order contact system at
// (alpha(s), beta(t)); zero iff a conic has third-order contact with both.
double aess_determinant(const CurvePair& pair, double s, double t);

// Null conic of the contact system (requires |aess_determinant| < tol).
// Also reports the singular-value gap ratio sigma[4]/sigma[5].
Conic aess_conic(const CurvePair& pair, double s, double t, double tol = 1e-6,
                 double* gap_ratio = nullptr);

struct MidlineRecord {
    double s = 0.0, t = 0.0;
    Vec2 point;      // chord midpoint x(s,t)
    Vec2 direction;  // unit direction of the midline
    std::optional<Vec2> tangent_intersection;  // nullopt for parallel tangents
};

MidlineRecord midline(const CurvePair& pair, double s, double t);

struct LocalSymmetryPoint {
    double s = 0.0, t = 0.0;
    Conic conic;
    MidlineRecord line;
    bool on_singular_set = false;  // E meets S here: not a regular singular point
};

struct AessResult {
    std::vector<std::vector<LocalSymmetryPoint>> branches;
    bool degenerate_e = false;  // determinant vanishes over the whole window
    int degenerate_seeds = 0;
};

// Traced zero set of aess_determinant with conic center and midline per point.
AessResult local_symmetry_points(const CurvePair& pair, const Window& window,
                                 double tol = 1e-9, double step = 1e-3,
                                 Exec exec = Exec::Parallel);

}  // namespace affsphere
