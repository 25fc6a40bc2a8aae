#pragma once

#include <optional>
#include <vector>

#include "affsphere/area_distance.hpp"
#include "affsphere/grid.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// Coefficients of the cubic form a^3 ds^3 - b^3 dt^3. The form vanishes in
// the direction a ds = b dt.
struct CubicFormCoeffs {
    double a = 0.0;
    double b = 0.0;
};

// Full second-order jet of the immersion q = (x, g) at one parameter point,
// with the structure scalars of the asymptotic parameterization.
//
// L and N vanish identically for this construction; M is evaluated in the
// orientation with M >= 0 (roles of s and t exchanged in the determinant),
// and equals omega^2. xi is q_st over the smooth signed root of M and is
// (0,0,1) wherever omega != 0.
struct ImmersionPoint {
    double s = 0.0, t = 0.0;
    Vec3 q;
    Vec3 q_s, q_t, q_ss, q_st, q_tt;
    Vec3 nu;  // conormal (-n, 1)
    Vec3 xi;  // affine normal; zero vector at singular points
    double L = 0.0, M = 0.0, N = 0.0;
    double omega = 0.0;
    double g_st = 0.0;
    CubicFormCoeffs cubic;
};

ImmersionPoint immerse(const CurvePair& pair, double s, double t,
                       double quad_tol = 1e-10);
// Variant with a precomputed g (grid paths).
ImmersionPoint immerse_with_g(const CurvePair& pair, double s, double t, double g);

CubicFormCoeffs cubic_form(const CurvePair& pair, double s, double t);

// Transform of space preserving the direction of the affine normal.
struct SpaceTransform {
    enum class Kind { Translate, PlanarAffine, Shear } kind = Kind::Translate;
    Vec2 w;                    // translate
    double w3 = 0.0;           // translate, vertical part
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;  // planar_affine
    Vec2 v;                    // planar_affine offset
    Vec2 shear;                // shear vector

    static SpaceTransform translate(Vec2 w, double w3);
    static SpaceTransform planar_affine(double a11, double a12, double a21,
                                        double a22, Vec2 v);
    static SpaceTransform make_shear(Vec2 a);
};

// Curve pair generating the transformed surface.
CurvePair apply_transform(const CurvePair& pair, const SpaceTransform& T);

// Action of T on a surface point (x, z). For planar_affine the vertical
// coordinate scales by det A, which is the map actually induced on g.
Vec3 apply_to_surface(const SpaceTransform& T, const Vec3& q);

struct HessianReport {
    double max_abs_dev = 0.0;  // max |det D^2 g + 1|
    double arg_s = 0.0, arg_t = 0.0;
    int evaluated = 0;
    int skipped_singular = 0;
    double h = 0.0;
};

// Central-difference Hessian of g with respect to x at each grid point;
// probes are pulled back through the (s,t) -> x chart by Newton. Points where
// that chart is near-singular are skipped and counted; throws SingularRegion
// when nothing is evaluable.
HessianReport hessian_det_check(const CurvePair& pair, const SurfaceGrid& grid,
                                double h, Exec exec = Exec::Parallel);

// Per-point surface data for the inverse construction: positions and the
// gradient of g on a parameter lattice.
struct GradientGrid {
    std::vector<double> s_values;
    std::vector<double> t_values;
    std::vector<Vec2> x;  // row-major i*nt + j
    std::vector<Vec2> n;
    // determinant of the differenced chart Jacobian, filled by from_values;
    // entries of n are NaN where the chart folds (conditioning too poor)
    std::vector<double> chart_det;

    const Vec2& x_at(int i, int j) const {
        return x[static_cast<size_t>(i) * t_values.size() + static_cast<size_t>(j)];
    }
    const Vec2& n_at(int i, int j) const {
        return n[static_cast<size_t>(i) * t_values.size() + static_cast<size_t>(j)];
    }

    static GradientGrid from_surface(const SurfaceGrid& grid);
    // Builds the gradient by differencing g through the (s,t) -> x chart.
    static GradientGrid from_values(std::vector<double> s_values,
                                    std::vector<double> t_values,
                                    std::vector<Vec2> x, const std::vector<double>& g);
};

struct ExtractionResult {
    PlanarCurve alpha;
    PlanarCurve beta;
    double cross_variation = 0.0;  // residual of the one-parameter dependence
    bool roles_swapped = false;    // input carried the opposite orientation
};

// Inverse construction: splits the surface data into the two generating
// curves, x + n^perp (a function of s alone) and x - n^perp (t alone). Each
// family is averaged over its transverse parameter; the maximal deviation
// from that average is reported. If the primary assignment fails, the roles
// of s and t are swapped once before giving up with NotAsymptotic.
ExtractionResult extract_curves(const GradientGrid& grid, double tol = 1e-6);

}  // namespace affsphere
