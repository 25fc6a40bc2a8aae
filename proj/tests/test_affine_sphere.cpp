#include <doctest.h>

#include <cmath>
#include <random>

#include "affsphere/affine_sphere.hpp"
#include "affsphere/fixtures.hpp"
#include "affsphere/grid.hpp"

using namespace affsphere;

namespace {

// maximum pointwise gap between the surface of the transformed pair and the
// transformed surface of the pair
double equivariance_gap(const CurvePair& pair, const SpaceTransform& T,
                        const Window& win, int n) {
    const CurvePair mapped = apply_transform(pair, T);
    const GridSpec spec{win, n, n, 1e-12};
    const SurfaceGrid base = evaluate_grid(pair, spec);
    const SurfaceGrid moved = evaluate_grid(mapped, spec);
    double worst = 0.0;
    for (size_t k = 0; k < base.samples.size(); ++k) {
        const SurfaceSample& b = base.samples[k];
        const SurfaceSample& m = moved.samples[k];
        const Vec3 expected = apply_to_surface(T, Vec3(b.x, b.g));
        worst = std::max(worst, (Vec3(m.x, m.g) - expected).norm());
    }
    return worst;
}

}  // namespace

TEST_CASE("immersion point structure") {
    const Fixture& fx = fixture("excusp1");
    SUBCASE("origin is singular") {
        const ImmersionPoint p = immerse(fx.pair, 0.0, 0.0);
        CHECK(p.q.norm() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(p.q_st.norm() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(p.omega == 0.0);
    }
    SUBCASE("affine normal away from the singular set") {
        for (double s : {0.1, 0.2}) {
            const ImmersionPoint p = immerse(fx.pair, s, 0.05);
            CHECK((p.xi - Vec3{0, 0, 1}).norm() < 1e-12);
        }
    }
    SUBCASE("asymptotic identities on a 400-point grid") {
        const Fixture& fx2 = fixture("excusp2");
        const GridSpec spec{{-0.5, 0.5, -0.5, 0.5}, 20, 20, 1e-10};
        const SurfaceGrid grid = evaluate_grid(fx2.pair, spec);
        double max_l = 0.0, max_n = 0.0, max_m = 0.0, max_xi = 0.0;
        for (const auto& sm : grid.samples) {
            const ImmersionPoint p = immerse_with_g(fx2.pair, sm.s, sm.t, sm.g);
            max_l = std::max(max_l, std::abs(p.L));
            max_n = std::max(max_n, std::abs(p.N));
            max_m = std::max(max_m, std::abs(p.M - p.omega * p.omega));
            if (std::abs(p.omega) > 1e-6)
                max_xi = std::max(max_xi, (p.xi - Vec3{0, 0, 1}).norm());
        }
        CHECK(max_l < 1e-10);
        CHECK(max_n < 1e-10);
        CHECK(max_m < 1e-12);
        CHECK(max_xi < 1e-9);
    }
    SUBCASE("conormal contracts") {
        const ImmersionPoint p = immerse(fx.pair, 0.15, -0.1);
        CHECK(std::abs(p.nu.dot(p.q_s)) < 1e-14);
        CHECK(std::abs(p.nu.dot(p.q_t)) < 1e-14);
        CHECK(p.nu.dot(p.xi) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cubic form coefficients") {
    const Fixture& fx1 = fixture("excusp1");
    for (double u : {-0.2, 0.0, 0.25}) {
        const CubicFormCoeffs c = cubic_form(fx1.pair, u, u);
        CHECK(c.a == doctest::Approx(std::cbrt(2.0 + 6.0 * u)).epsilon(1e-13));
        CHECK(c.b == doctest::Approx(-std::cbrt(2.0 + 6.0 * u)).epsilon(1e-13));
    }
    const Fixture& fx2 = fixture("excusp2");
    for (double u : {-0.5, 0.4}) {
        const CubicFormCoeffs c = cubic_form(fx2.pair, u, u);
        CHECK(c.a == doctest::Approx(std::cbrt(12.0 * u * u)).epsilon(1e-13));
        CHECK(c.b == doctest::Approx(-std::cbrt(12.0 * u * u)).epsilon(1e-13));
    }
    // straight line: a vanishes identically
    const CurvePair with_line = make_pair(
        PlanarCurve::polynomial({0.0, 1.0}, {0.0, 2.0}, {-1.0, 1.0}), fx1.pair.beta,
        0.0, 0.0);
    CHECK(cubic_form(with_line, 0.3, 0.0).a == 0.0);
    // the form a^3 u^3 - b^3 v^3 vanishes in the direction (u, v) = (b, a)
    const CubicFormCoeffs c = cubic_form(fx1.pair, 0.1, -0.05);
    const double val = std::pow(c.a * c.b, 3) - std::pow(c.b * c.a, 3);
    CHECK(val == 0.0);
}

TEST_CASE("hessian determinant verification") {
    SUBCASE("flat model") {
        // alpha = (2s, 0), beta = (0, 2t) generates the quadric graph
        const CurvePair flat = make_pair(
            PlanarCurve::polynomial({0.0, 2.0}, {0.0}, {-1.0, 1.0}),
            PlanarCurve::polynomial({0.0}, {0.0, 2.0}, {-1.0, 1.0}), 0.0, 0.0);
        const GridSpec spec{{0.2, 0.8, 0.2, 0.8}, 8, 8, 1e-12};
        const SurfaceGrid grid = evaluate_grid(flat, spec);
        const HessianReport rep = hessian_det_check(flat, grid, 1e-4);
        CHECK(rep.evaluated == 64);
        CHECK(rep.max_abs_dev < 1e-8);
    }
    SUBCASE("first fixture window") {
        const Fixture& fx = fixture("excusp1");
        const GridSpec spec{{0.05, 0.2, 0.05, 0.2}, 10, 10, 1e-12};
        const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
        const HessianReport rep = hessian_det_check(fx.pair, grid, 1e-4);
        CHECK(rep.evaluated == 100);
        CHECK(rep.max_abs_dev < 1e-4);
    }
    SUBCASE("second fixture away from its singular set") {
        const Fixture& fx = fixture("excusp2");
        const GridSpec spec{{0.1, 0.3, 0.1, 0.3}, 10, 10, 1e-12};
        const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
        const HessianReport rep = hessian_det_check(fx.pair, grid, 1e-4);
        CHECK(rep.max_abs_dev < 1e-4);
    }
}

TEST_CASE("curve extraction") {
    SUBCASE("round trip on the forward grid") {
        for (const char* name : {"excusp1", "excusp2"}) {
            const Fixture& fx = fixture(name);
            const GridSpec spec{{-0.2, 0.2, -0.2, 0.2}, 24, 24, 1e-12};
            const SurfaceGrid grid = evaluate_grid(fx.pair, spec);
            const ExtractionResult ex = extract_curves(GradientGrid::from_surface(grid));
            CHECK_FALSE(ex.roles_swapped);
            CHECK(ex.cross_variation < 1e-10);
            double worst = 0.0;
            for (double u : grid.s_values)
                worst = std::max(worst, (ex.alpha.point(u) - fx.pair.alpha.point(u)).norm());
            for (double u : grid.t_values)
                worst = std::max(worst, (ex.beta.point(u) - fx.pair.beta.point(u)).norm());
            CHECK(worst < 1e-8);
        }
    }
    SUBCASE("published chart of the second fixture") {
        // x and n as functions of (u, v), rotated to s = u+v, t = u-v
        GradientGrid grid;
        const int n = 17;
        for (int i = 0; i < n; ++i)
            grid.s_values.push_back(-0.4 + 0.8 * i / (n - 1));
        for (int j = 0; j < n; ++j)
            grid.t_values.push_back(-0.4 + 0.8 * j / (n - 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double s = grid.s_values[static_cast<size_t>(i)];
                const double t = grid.t_values[static_cast<size_t>(j)];
                const double u = 0.5 * (s + t), v = 0.5 * (s - t);
                grid.x.push_back({u * u + v * v - u * u * u - 3.0 * u * v * v,
                                  2.0 * u * v + 3.0 * u * u * v + v * v * v});
                grid.n.push_back({u * u + v * v + u * u * u + 3.0 * u * v * v,
                                  -2.0 * u * v + 3.0 * u * u * v + v * v * v});
            }
        const ExtractionResult ex = extract_curves(grid);
        CHECK_FALSE(ex.roles_swapped);
        double worst = 0.0;
        for (double s : grid.s_values) {
            const Vec2 expected{s * s - s * s * s, s * s + s * s * s};
            worst = std::max(worst, (ex.alpha.point(s) - expected).norm());
        }
        CHECK(worst < 1e-9);
    }
    SUBCASE("flat quadric graph gives two straight lines, opposite orientation") {
        GradientGrid grid;
        const int n = 9;
        for (int i = 0; i < n; ++i) {
            grid.s_values.push_back(-1.0 + 2.0 * i / (n - 1));
            grid.t_values.push_back(-1.0 + 2.0 * i / (n - 1));
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double s = grid.s_values[static_cast<size_t>(i)];
                const double t = grid.t_values[static_cast<size_t>(j)];
                grid.x.push_back({s, t});
                grid.n.push_back({t, s});  // gradient of g = st
            }
        const ExtractionResult ex = extract_curves(grid);
        CHECK(ex.roles_swapped);
        for (double u : {-0.8, 0.1, 0.9}) {
            CHECK(std::abs(ex.alpha.point(u).y) < 1e-10);  // the x-axis, stretched
            CHECK(ex.alpha.point(u).x == doctest::Approx(2.0 * u).epsilon(1e-10));
            CHECK(std::abs(ex.beta.point(u).x) < 1e-10);
            CHECK(ex.beta.point(u).y == doctest::Approx(2.0 * u).epsilon(1e-10));
        }
    }
    SUBCASE("garbage gradient is rejected") {
        GradientGrid grid;
        const int n = 8;
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < n; ++i) {
            grid.s_values.push_back(i);
            grid.t_values.push_back(i);
        }
        for (int i = 0; i < n * n; ++i) {
            grid.x.push_back({dist(rng), dist(rng)});
            grid.n.push_back({dist(rng), dist(rng)});
        }
        CHECK_THROWS_AS((void)extract_curves(grid), Error);
    }
}

TEST_CASE("space transforms") {
    const Fixture& fx = fixture("excusp1");
    const Window win{-0.15, 0.15, -0.15, 0.15};
    SUBCASE("zero shear is the identity") {
        const CurvePair same = apply_transform(fx.pair, SpaceTransform::make_shear({0, 0}));
        for (double u : {-0.1, 0.2})
            CHECK((same.alpha.point(u) - fx.pair.alpha.point(u)).norm() == 0.0);
        CHECK(same.g_base == fx.pair.g_base);
    }
    SUBCASE("shear equivariance") {
        CHECK(equivariance_gap(fx.pair, SpaceTransform::make_shear({1.0, 0.0}), win, 15) <
              1e-9);
    }
    SUBCASE("translation moves x and keeps g") {
        const SpaceTransform T = SpaceTransform::translate({0.3, -0.2}, 0.0);
        const CurvePair moved = apply_transform(fx.pair, T);
        const SurfaceSample a = sample_at(fx.pair, 0.1, 0.05);
        const SurfaceSample b = sample_at(moved, 0.1, 0.05);
        CHECK((b.x - a.x - Vec2{0.3, -0.2}).norm() < 1e-12);
        CHECK(b.g == doctest::Approx(a.g).epsilon(1e-12));
    }
    SUBCASE("all kinds commute with the construction") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> dist(-0.8, 0.8);
        for (int k = 0; k < 3; ++k) {
            const SpaceTransform tr =
                SpaceTransform::translate({dist(rng), dist(rng)}, dist(rng));
            CHECK(equivariance_gap(fx.pair, tr, win, 15) < 1e-8);
            double a = dist(rng), b = dist(rng), c = dist(rng);
            if (std::abs(a) < 0.2) a = 0.7;
            const double d = (1.0 + b * c) / a;
            const SpaceTransform af =
                SpaceTransform::planar_affine(a, b, c, d, {dist(rng), dist(rng)});
            CHECK(equivariance_gap(fx.pair, af, win, 15) < 1e-8);
            const SpaceTransform sh = SpaceTransform::make_shear({dist(rng), dist(rng)});
            CHECK(equivariance_gap(fx.pair, sh, win, 15) < 1e-8);
        }
    }
    SUBCASE("singular matrix is rejected") {
        CHECK_THROWS_AS(
            (void)apply_transform(fx.pair,
                                  SpaceTransform::planar_affine(1, 2, 2, 4, {0, 0})),
            Error);
    }
}
