#include <doctest.h>

#include <cmath>
#include <random>

#include "affsphere/affine_sphere.hpp"
#include "affsphere/fixtures.hpp"
#include "affsphere/singular.hpp"
#include "affsphere/symmetry.hpp"

using namespace affsphere;

namespace {

PlanarCurve circle_arc(Interval dom) {
    return PlanarCurve::analytic(
        [](double u) {
            CurveJet j;
            j.p = {std::cos(u), std::sin(u)};
            j.d1 = {-std::sin(u), std::cos(u)};
            j.d2 = {-std::cos(u), -std::sin(u)};
            j.d3 = {std::sin(u), -std::cos(u)};
            return j;
        },
        dom);
}

PlanarCurve hyperbola_arc(Interval dom) {
    // (u, 1/u) with exact jets
    return PlanarCurve::analytic(
        [](double u) {
            CurveJet j;
            j.p = {u, 1.0 / u};
            j.d1 = {1.0, -1.0 / (u * u)};
            j.d2 = {0.0, 2.0 / (u * u * u)};
            j.d3 = {0.0, -6.0 / (u * u * u * u)};
            return j;
        },
        dom);
}

double angle_between(const Vec2& u, const Vec2& v) {
    const double un = u.norm(), vn = v.norm();
    if (un < 1e-15 || vn < 1e-15) return 0.0;
    return std::asin(std::min(1.0, std::abs(det2(u / un, v / vn))));
}

}  // namespace

TEST_CASE("contact determinant vanishes identically on a shared conic") {
    const CurvePair pair = make_pair(circle_arc({0.0, 1.0}), circle_arc({2.0, 3.0}),
                                     0.5, 2.5);
    for (double s : {0.1, 0.6, 0.9})
        for (double t : {2.2, 2.8})
            CHECK(std::abs(aess_determinant(pair, s, t)) < 1e-12);
}

TEST_CASE("contact determinant sign change brackets a root") {
    // a generic polynomial pair: scan a segment, bisect the bracket
    const CurvePair pair = make_pair(
        PlanarCurve::polynomial({0.0, 1.0, 0.3, -0.2, 0.05, 0.01},
                                {-1.0, 0.1, 1.0, 0.8, -0.3, 0.02}, {-1.0, 1.0}),
        PlanarCurve::polynomial({0.2, 0.9, -0.4, 0.3, -0.05, 0.0},
                                {1.0, -0.2, -1.1, 0.5, 0.1, -0.01}, {-1.0, 1.0}),
        0.0, 0.0);
    auto f = [&](double u) { return aess_determinant(pair, u, 0.4 - 0.3 * u); };
    double prev_u = -0.6, prev = f(prev_u);
    bool bracketed = false;
    for (int i = 1; i <= 60 && !bracketed; ++i) {
        const double u = -0.6 + 1.2 * i / 60.0;
        const double val = f(u);
        if ((val < 0.0) != (prev < 0.0)) {
            double lo = prev_u, hi = u, flo = prev;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi), fm = f(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            CHECK(std::abs(f(0.5 * (lo + hi))) < 1e-9);
            bracketed = true;
        }
        prev_u = u;
        prev = val;
    }
    CHECK(bracketed);
}

TEST_CASE("null conic recovery") {
    SUBCASE("unit circle") {
        const CurvePair pair = make_pair(circle_arc({0.0, 1.0}), circle_arc({2.0, 3.0}),
                                         0.5, 2.5);
        double gap = 0.0;
        const Conic conic = aess_conic(pair, 0.4, 2.6, 1e-8, &gap);
        CHECK(conic.kind == Conic::Kind::Ellipse);
        REQUIRE(conic.center.has_value());
        CHECK(conic.center->norm() < 1e-10);
        CHECK(gap > 1e3);
        // the recovered conic vanishes on the circle
        for (double u : {0.3, 1.2, 4.0})
            CHECK(std::abs(conic.evaluate({std::cos(u), std::sin(u)})) < 1e-10);
    }
    SUBCASE("rectangular hyperbola") {
        const CurvePair pair = make_pair(hyperbola_arc({0.5, 1.5}),
                                         hyperbola_arc({-2.0, -0.5}), 1.0, -1.0);
        const Conic conic = aess_conic(pair, 0.8, -1.2, 1e-8);
        CHECK(conic.kind == Conic::Kind::Hyperbola);
        REQUIRE(conic.center.has_value());
        CHECK(conic.center->norm() < 1e-10);
    }
    SUBCASE("off the locus it refuses") {
        const Fixture& fx = fixture("excusp1");
        CHECK_THROWS_AS((void)aess_conic(fx.pair, 0.1, -0.05, 1e-10), Error);
    }
}

TEST_CASE("midline") {
    SUBCASE("elementary tangent intersection") {
        const CurvePair pair = make_pair(
            PlanarCurve::polynomial({0.0, 1.0}, {0.0}, {-1.0, 1.0}),
            PlanarCurve::polynomial({2.0}, {2.0, 1.0}, {-1.0, 1.0}), 0.0, 0.0);
        const MidlineRecord rec = midline(pair, 0.0, 0.0);
        CHECK((rec.point - Vec2{1.0, 1.0}).norm() < 1e-14);
        REQUIRE(rec.tangent_intersection.has_value());
        CHECK((*rec.tangent_intersection - Vec2{2.0, 0.0}).norm() < 1e-14);
        CHECK(angle_between(rec.direction, Vec2{1.0, -1.0}) < 1e-14);
    }
    SUBCASE("parallel tangents run the midline along them") {
        const Fixture& fx = fixture("excusp1");
        const MidlineRecord rec = midline(fx.pair, 0.0, 0.0);  // singular point
        CHECK_FALSE(rec.tangent_intersection.has_value());
        CHECK(angle_between(rec.direction, fx.pair.alpha.jet(0.0).d1) < 1e-12);
    }
    SUBCASE("coincident tangent lines are an error") {
        const CurvePair pair = make_pair(
            PlanarCurve::polynomial({0.0, 1.0}, {0.0}, {-1.0, 1.0}),
            PlanarCurve::polynomial({1.0, 1.0}, {0.0}, {-1.0, 1.0}), 0.0, 0.0);
        CHECK_THROWS_AS((void)midline(pair, 0.0, 0.0), Error);
    }
}

TEST_CASE("AASS of the mirror-symmetric fixture") {
    const Fixture& fx = fixture("excusp1");
    AassOptions opts;
    opts.window = fx.symmetry_window;
    const AassResult result = aass_solve(fx.pair, opts);
    REQUIRE_FALSE(result.branches.empty());

    size_t total = 0;
    double worst_y = 0.0, worst_x = -1e300;
    double worst_angle = 0.0, worst_parallel = 0.0, end_to_cusp = 1e300;
    for (const auto& branch : result.branches) {
        for (size_t i = 0; i < branch.size(); ++i) {
            const ChordPairSolution& sol = branch[i];
            ++total;
            CHECK(sol.residual < 1e-9);
            CHECK(sol.separation > 0.01);
            worst_y = std::max(worst_y, std::abs(sol.midpoint.y));
            worst_x = std::max(worst_x, sol.midpoint.x);
            // both secant properties of the solution curve
            const Vec2 da = fx.pair.alpha.point(sol.s1) - fx.pair.alpha.point(sol.s2);
            const Vec2 db = fx.pair.beta.point(sol.t1) - fx.pair.beta.point(sol.t2);
            worst_parallel = std::max(worst_parallel, angle_between(da, db));
            if (i + 1 < branch.size())
                worst_angle =
                    std::max(worst_angle, aass_tangent_angle(fx.pair, branch[i],
                                                             branch[i + 1]));
        }
        // branch ends approach the evolute cusp at the origin
        end_to_cusp = std::min({end_to_cusp, branch.front().midpoint.norm(),
                                branch.back().midpoint.norm()});
    }
    CHECK(total > 20);
    CHECK(worst_y < 1e-3);          // the axis of symmetry is the x axis
    CHECK(worst_x < 1e-9);          // midpoints on the negative half
    CHECK(worst_angle < 1e-2);      // tangent parallel to alpha(s1) - alpha(s2)
    CHECK(worst_parallel < 1e-6);   // alpha secant parallel to beta secant
    CHECK(end_to_cusp < 1e-3);      // endpoint on the area evolute's cusp
}

TEST_CASE("local symmetry points of the first fixture") {
    const Fixture& fx = fixture("excusp1");
    const AessResult result = local_symmetry_points(fx.pair, fx.symmetry_window);
    CHECK_FALSE(result.degenerate_e);
    REQUIRE_FALSE(result.branches.empty());

    size_t total = 0, flagged = 0;
    double worst_y = 0.0, worst_x = -1e300, worst_diag = 0.0;
    for (const auto& branch : result.branches)
        for (const auto& p : branch) {
            ++total;
            worst_diag = std::max(worst_diag, std::abs(p.s - p.t));
            if (p.conic.center) {
                worst_y = std::max(worst_y, std::abs(p.conic.center->y));
                worst_x = std::max(worst_x, -p.conic.center->x);
            }
            if (p.on_singular_set) ++flagged;
        }
    CHECK(total > 50);
    CHECK(worst_diag < 1e-8);  // the locus is the diagonal here
    CHECK(worst_y < 1e-3);
    CHECK(worst_x < 1e-9);     // centers on the positive half-axis
    CHECK(flagged > 0);        // the meeting point with the singular set is marked

    SUBCASE("midline is tangent to the center locus") {
        double worst = 0.0;
        for (const auto& branch : result.branches) {
            std::vector<Vec2> centers;
            std::vector<size_t> idx;
            for (size_t i = 0; i < branch.size(); ++i)
                if (branch[i].conic.center) {
                    centers.push_back(*branch[i].conic.center);
                    idx.push_back(i);
                }
            for (size_t k = 1; k + 1 < centers.size(); ++k) {
                const Vec2 tangent = centers[k + 1] - centers[k - 1];
                if (tangent.norm() < 1e-12) continue;
                worst = std::max(worst,
                                 angle_between(tangent, branch[idx[k]].line.direction));
            }
        }
        CHECK(worst < 1e-2);
    }
}

TEST_CASE("null-space gap and local reflection symmetry along E") {
    const Fixture& fx = fixture("excusp1");
    const AessResult result = local_symmetry_points(fx.pair, fx.symmetry_window);
    REQUIRE_FALSE(result.branches.empty());
    double worst_sym = 0.0;
    size_t checked = 0;
    for (const auto& branch : result.branches)
        for (size_t i = 0; i < branch.size(); i += 7) {
            const auto& p = branch[i];
            // one-dimensional null space at generic points
            double gap = 0.0;
            (void)aess_conic(fx.pair, p.s, p.t, 1e-6, &gap);
            CHECK(gap > 1e3);
            // affine reflection fixing the midline, along the chord direction
            const Vec2 chord =
                fx.pair.beta.point(p.t) - fx.pair.alpha.point(p.s);
            if (chord.norm() < 1e-6) continue;
            const Vec2 d = chord / chord.norm();
            const Vec2 m = p.line.direction;
            const double basis_det = det2(m, d);
            if (std::abs(basis_det) < 1e-9) continue;
            auto reflect = [&](const Vec2& v) {
                const double a = det2(v, d) / basis_det;
                const double b = det2(m, v) / basis_det;
                return a * m - b * d;
            };
            const CurveJet ja = fx.pair.alpha.jet(p.s);
            const CurveJet jb = fx.pair.beta.jet(p.t);
            const Vec2 ta = ja.d1 / cubic_coefficient(ja);  // affine tangents
            const Vec2 tb = jb.d1 / cubic_coefficient(jb);
            const Vec2 r = reflect(ta);
            worst_sym = std::max(
                worst_sym, std::min((r - tb).norm(), (r + tb).norm()));
            ++checked;
        }
    CHECK(checked > 5);
    CHECK(worst_sym < 1e-6);
}

TEST_CASE("degenerate locus for a shared conic") {
    const CurvePair pair = make_pair(circle_arc({0.0, 1.0}), circle_arc({2.0, 3.0}),
                                     0.5, 2.5);
    const AessResult result =
        local_symmetry_points(pair, {0.1, 0.9, 2.1, 2.9});
    CHECK(result.degenerate_e);
    CHECK(result.branches.empty());
}

TEST_CASE("contact determinant zero set is equi-affine invariant") {
    const Fixture& fx = fixture("excusp1");
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < 3; ++k) {
        double a = dist(rng), b = dist(rng), c = dist(rng);
        if (std::abs(a) < 0.2) a = 1.1;
        const double d = (1.0 + b * c) / a;
        const SpaceTransform T = SpaceTransform::planar_affine(a, b, c, d, {0.3, -0.1});
        const CurvePair mapped = apply_transform(fx.pair, T);
        // diagonal points belong to E for this pair; they must stay on E
        for (double u : {-0.1, 0.02, 0.12})
            CHECK(std::abs(aess_determinant(mapped, u, u)) < 1e-6);
    }
}
