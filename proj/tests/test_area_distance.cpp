#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "affsphere/area_distance.hpp"
#include "affsphere/fixtures.hpp"
#include "affsphere/grid.hpp"

using namespace affsphere;

namespace {

PlanarCurve circle_arc(double radius, Interval dom) {
    return PlanarCurve::analytic(
        [radius](double u) {
            CurveJet j;
            j.p = {radius * std::cos(u), radius * std::sin(u)};
            j.d1 = {-radius * std::sin(u), radius * std::cos(u)};
            j.d2 = {-radius * std::cos(u), -radius * std::sin(u)};
            j.d3 = {radius * std::sin(u), -radius * std::cos(u)};
            return j;
        },
        dom);
}

// signed polygon area by the shoelace formula
double shoelace(const std::vector<Vec2>& poly) {
    double acc = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        acc += det2(p, q);
    }
    return 0.5 * acc;
}

// polygonal model of the region measured by chord_area: chord beta(t)->alpha(s),
// alpha back to the base, base chord, beta out to t
double shoelace_region(const CurvePair& pair, double s, double t, int n) {
    std::vector<Vec2> poly;
    poly.reserve(static_cast<size_t>(2 * n) + 4);
    for (int i = 0; i <= n; ++i)
        poly.push_back(pair.alpha.point(s + (pair.s0 - s) * i / n));
    for (int i = 0; i <= n; ++i)
        poly.push_back(pair.beta.point(pair.t0 + (t - pair.t0) * i / n));
    return shoelace(poly);
}

}  // namespace

TEST_CASE("chord midpoint") {
    const Fixture& fx1 = fixture("excusp1");
    CHECK(midpoint(fx1.pair, 0.0, 0.0).norm() == 0.0);
    const Fixture& fx2 = fixture("excusp2");
    const Vec2 m = midpoint(fx2.pair, 1.0, 1.0);
    CHECK(m.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m.y == doctest::Approx(0.0).epsilon(1e-15));
    // coincident endpoints: midpoint is that point
    const Vec2 p = midpoint(fx2.pair, 0.0, 0.0);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
}

TEST_CASE("half normal") {
    const Fixture& fx1 = fixture("excusp1");
    const Vec2 n0 = half_normal(fx1.pair, 0.0, 0.0);
    CHECK(n0.x == doctest::Approx(-1.0));
    CHECK(n0.y == doctest::Approx(0.0));
    CHECK(half_normal(fixture("excusp2").pair, 0.0, 0.0).norm() == 0.0);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (int k = 0; k < 100; ++k) {
        const double s = dist(rng), t = dist(rng);
        const Vec2 chord = fx1.pair.beta.point(t) - fx1.pair.alpha.point(s);
        const Vec2 n = half_normal(fx1.pair, s, t);
        CHECK(n.norm() == doctest::Approx(0.5 * chord.norm()).epsilon(1e-13));
        CHECK(std::abs(n.dot(chord)) < 1e-13);
    }
}

TEST_CASE("closed-form partials of g") {
    const Fixture& fx1 = fixture("excusp1");
    const auto [gs, gt] = g_partials(fx1.pair, 0.0, 0.0);
    CHECK(gs == doctest::Approx(-0.5));
    CHECK(gt == doctest::Approx(-0.5));

    // crossing chord of length zero
    const CurvePair crossing = make_pair(
        PlanarCurve::polynomial({0.0, 1.0}, {0.0, 1.0}, {-1.0, 1.0}),
        PlanarCurve::polynomial({0.0, 1.0}, {0.0, -1.0}, {-1.0, 1.0}), 0.0, 0.0);
    const auto [cs, ct] = g_partials(crossing, 0.0, 0.0);
    CHECK(cs == 0.0);
    CHECK(ct == 0.0);
}

TEST_CASE("partials match finite differences of the accumulated g") {
    const Fixture& fx1 = fixture("excusp1");
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double s = -0.2 + 0.4 * i / 19.0, t = -0.2 + 0.4 * j / 19.0;
            const auto [gs, gt] = g_partials(fx1.pair, s, t);
            const double fds = (accumulate_g(fx1.pair, s + h, t, 1e-12) -
                                accumulate_g(fx1.pair, s - h, t, 1e-12)) /
                               (2.0 * h);
            const double fdt = (accumulate_g(fx1.pair, s, t + h, 1e-12) -
                                accumulate_g(fx1.pair, s, t - h, 1e-12)) /
                               (2.0 * h);
            worst = std::max({worst, std::abs(fds - gs), std::abs(fdt - gt)});
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("accumulated g") {
    const Fixture& fx = fixture("excusp1");
    SUBCASE("base value") {
        CHECK(accumulate_g(fx.pair, 0.0, 0.0) == 0.0);
        CurvePair shifted = fx.pair;
        shifted.g_base = 2.5;
        CHECK(accumulate_g(shifted, 0.0, 0.0) == 2.5);
    }
    SUBCASE("reference closed form, gauged") {
        double worst = 0.0;
        for (int i = 0; i <= 10; ++i)
            for (int j = 0; j <= 10; ++j) {
                const double s = -0.2 + 0.4 * i / 10.0, t = -0.2 + 0.4 * j / 10.0;
                const double got = fx.g_gauge * accumulate_g(fx.pair, s, t);
                worst = std::max(worst, std::abs(got - fx.reference_g(s, t)));
            }
        CHECK(worst < 1e-8);
    }
    SUBCASE("path order") {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> dist(-0.4, 0.4);
        const double quad_tol = 1e-10;
        for (int k = 0; k < 100; ++k) {
            const double s = dist(rng), t = dist(rng);
            const double g1 = accumulate_g(fx.pair, s, t, quad_tol, PathOrder::SLegFirst);
            const double g2 = accumulate_g(fx.pair, s, t, quad_tol, PathOrder::TLegFirst);
            CHECK(std::abs(g1 - g2) < 2.0 * quad_tol);
        }
    }
}

TEST_CASE("mixed partial symmetry against omega") {
    const Fixture& fx = fixture("excusp1");
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const double s = -0.2 + 0.4 * i / 11.0, t = -0.2 + 0.4 * j / 11.0;
            const double dt_gs = (g_partials(fx.pair, s, t + h).first -
                                  g_partials(fx.pair, s, t - h).first) /
                                 (2.0 * h);
            const double ds_gt = (g_partials(fx.pair, s + h, t).second -
                                  g_partials(fx.pair, s - h, t).second) /
                                 (2.0 * h);
            const double om = omega(fx.pair, s, t);
            worst = std::max({worst, std::abs(dt_gs - ds_gt),
                              std::abs(std::abs(dt_gs) - std::abs(om))});
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("omega closed forms, gauged") {
    for (const char* name : {"excusp1", "excusp2"}) {
        const Fixture& fx = fixture(name);
        double worst = 0.0;
        for (int i = 0; i <= 15; ++i)
            for (int j = 0; j <= 15; ++j) {
                const double s = -0.4 + 0.8 * i / 15.0, t = -0.4 + 0.8 * j / 15.0;
                worst = std::max(worst, std::abs(fx.omega_gauge * omega(fx.pair, s, t) -
                                                 fx.reference_omega(s, t)));
            }
        CHECK(worst < 1e-13);
    }
    // parallel tangents
    const Fixture& fx1 = fixture("excusp1");
    CHECK(omega(fx1.pair, 0.0, 0.0) == 0.0);
}

TEST_CASE("chord area") {
    const Fixture& fx = fixture("excusp1");
    SUBCASE("degenerate region at the base") {
        CHECK(chord_area(fx.pair, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("A/2 - g is constant") {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double s = -0.2 + 0.4 * i / 9.0, t = -0.2 + 0.4 * j / 9.0;
                const double v =
                    0.5 * chord_area(fx.pair, s, t) - accumulate_g(fx.pair, s, t);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        CHECK(hi - lo < 1e-8);
    }
    SUBCASE("annular sector against the shoelace oracle") {
        const CurvePair rings = make_pair(circle_arc(1.0, {0.0, 2.0}),
                                          circle_arc(2.0, {0.0, 2.0}), 0.0, 0.0);
        const double quarter = std::numbers::pi / 2.0;
        const double area = chord_area(rings, quarter, quarter);
        const double oracle = shoelace_region(rings, quarter, quarter, 5000);
        CHECK(area == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(std::abs(area) == doctest::Approx(3.0 * std::numbers::pi / 4.0)
                                    .epsilon(1e-8));
        // random-window cross-check on a polynomial pair
        const double a2 = chord_area(fx.pair, 0.15, -0.1);
        CHECK(a2 == doctest::Approx(shoelace_region(fx.pair, 0.15, -0.1, 4000))
                        .epsilon(1e-6));
    }
}

TEST_CASE("full samples carry consistent fields") {
    const Fixture& fx = fixture("excusp2");
    const SurfaceSample sm = sample_at(fx.pair, 0.3, -0.2);
    CHECK(sm.n.dot(fx.pair.beta.point(-0.2) - fx.pair.alpha.point(0.3)) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sm.g_s == doctest::Approx(g_partials(fx.pair, 0.3, -0.2).first));
    CHECK(sm.omega == doctest::Approx(omega(fx.pair, 0.3, -0.2)));
    CHECK(sm.a == doctest::Approx(cubic_coefficient(fx.pair.alpha, 0.3)));
    CHECK(sm.b == doctest::Approx(cubic_coefficient(fx.pair.beta, -0.2)));
}
