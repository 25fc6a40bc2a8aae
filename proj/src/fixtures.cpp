#include "affsphere/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affsphere/grid.hpp"
#include "affsphere/singular.hpp"
#include "affsphere/symmetry.hpp"

namespace affsphere {

namespace {

Fixture make_excusp1() {
    Fixture fx;
    fx.name = "excusp1";
    fx.pair = make_pair(
        PlanarCurve::polynomial({0.0, 1.0}, {-1.0, 0.0, 1.0, 1.0}, {-2.0, 2.0}),
        PlanarCurve::polynomial({0.0, 1.0}, {1.0, 0.0, -1.0, -1.0}, {-2.0, 2.0}), 0.0,
        0.0, 0.0);
    fx.default_window = {-0.9, 0.3, -0.9, 0.3};
    // the census of one swallowtail at the origin is a local statement; the
    // full circle carries a second one at (-2/3, -2/3)
    fx.classify_window = {-0.35, 0.35, -0.35, 0.35};
    fx.symmetry_window = {-0.15, 0.15, -0.15, 0.15};
    fx.singular_residual = [](double s, double t) {
        const double u = 3.0 * s + 1.0, v = 3.0 * t + 1.0;
        return std::abs(u * u + v * v - 2.0);
    };
    fx.swallowtails = {{0.0, 0.0}};
    fx.lambda_law = [](double s, double t) {
        return real_cbrt((2.0 + 6.0 * t) / (2.0 + 6.0 * s));
    };
    fx.reference_g = [](double s, double t) {
        return 2.0 * s + 2.0 * t + s * s * s / 3.0 + s * s * s * s / 2.0 +
               t * t * t / 3.0 + t * t * t * t / 2.0 - s * t * t - t * s * s -
               s * t * t * t - t * s * s * s;
    };
    fx.g_gauge = -4.0;
    fx.reference_omega = [](double s, double t) {
        return 0.25 * (2.0 * s + 3.0 * s * s + 2.0 * t + 3.0 * t * t);
    };
    fx.omega_gauge = -1.0;
    fx.aass_x_sign = -1;
    fx.aess_x_sign = 1;
    return fx;
}

Fixture make_excusp2() {
    Fixture fx;
    fx.name = "excusp2";
    fx.pair = make_pair(
        PlanarCurve::polynomial({0.0, 0.0, 1.0, -1.0}, {0.0, 0.0, 1.0, 1.0},
                                {-2.0, 2.0}),
        PlanarCurve::polynomial({0.0, 0.0, 1.0, -1.0}, {0.0, 0.0, -1.0, -1.0},
                                {-2.0, 2.0}),
        0.0, 0.0, 0.0);
    fx.default_window = {-1.5, 1.5, -1.5, 1.5};
    fx.classify_window = fx.default_window;
    fx.symmetry_window = {-1.0, -0.4, -1.0, -0.4};
    fx.singular_residual = [](double s, double t) {
        // the zero set splits into the coordinate axes and 9st = 4
        return std::min(std::abs(9.0 * s * t - 4.0), 9.0 * std::abs(s * t));
    };
    fx.swallowtails = {{-2.0 / 3.0, -2.0 / 3.0}};
    fx.lambda_law = [](double s, double) {
        const double r = 1.5 * s;
        return -real_cbrt(r * r * r * r * r);
    };
    fx.reference_g = [](double s, double t) {
        const double s2 = s * s, t2 = t * t;
        return 0.5 * (s2 * t2 - s2 * s * t2 * t -
                      (s2 * s2 * s + t2 * t2 * t) / 5.0);
    };
    fx.g_gauge = 1.0;
    fx.reference_omega = [](double s, double t) {
        return -0.5 * s * t * (4.0 - 9.0 * s * t);
    };
    fx.omega_gauge = 1.0;
    return fx;
}

const std::vector<Fixture>& all_fixtures() {
    static const std::vector<Fixture> fixtures = {make_excusp1(), make_excusp2()};
    return fixtures;
}

}  // namespace

const Fixture& fixture(const std::string& name) {
    for (const Fixture& fx : all_fixtures())
        if (fx.name == name) return fx;
    fail(ErrorKind::Config, "unknown fixture '" + name + "'");
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const Fixture& fx : all_fixtures()) names.push_back(fx.name);
    return names;
}

namespace {

CheckResult check(const std::string& name, double value, double threshold,
                  std::string detail = {}) {
    return {name, value <= threshold, value, threshold, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_fixture_checks(const Fixture& fx) {
    std::vector<CheckResult> out;

    // singular set: implicit-equation residual over every traced point
    const SingularSetResult traced =
        trace_singular_set(fx.pair, fx.default_window, fx.trace_step);
    double max_residual = 0.0;
    size_t n_points = 0;
    for (const auto& branch : traced.branches)
        for (const auto& p : branch.points) {
            max_residual = std::max(max_residual, fx.singular_residual(p.s, p.t));
            ++n_points;
        }
    out.push_back(check("singular set residual", max_residual, 1e-6,
                        std::to_string(n_points) + " traced points"));

    // swallowtail census on the classification window
    const SingularSetResult classified =
        trace_singular_set(fx.pair, fx.classify_window, fx.trace_step);
    std::vector<Vec2> found;
    for (const auto& branch : classified.branches)
        for (const auto& p : branch.points)
            if (p.kind == SingularKind::Swallowtail) found.push_back({p.s, p.t});
    double census_err = found.size() == fx.swallowtails.size() ? 0.0 : 1.0;
    double worst_loc = 0.0;
    for (const Vec2& exp : fx.swallowtails) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec2& got : found) best = std::min(best, (got - exp).norm());
        worst_loc = std::max(worst_loc, best);
    }
    out.push_back(check("swallowtail count", census_err, 0.0,
                        std::to_string(found.size()) + " found"));
    out.push_back(check("swallowtail location", worst_loc, 1e-4));

    // other branch points: cuspidal edges only, lambda law holds
    size_t misclassified = 0;
    double lambda_err = 0.0;
    for (const auto& branch : classified.branches)
        for (const auto& p : branch.points) {
            if (p.kind == SingularKind::Degenerate) continue;
            if (p.kind == SingularKind::Unclassified) ++misclassified;
            if (std::isfinite(p.lambda))
                lambda_err =
                    std::max(lambda_err, std::abs(p.lambda - fx.lambda_law(p.s, p.t)));
        }
    out.push_back(check("unclassified points", static_cast<double>(misclassified), 0.0));
    out.push_back(check("lambda law", lambda_err, 1e-5));

    // g against the reference closed form, up to the recorded gauge and an
    // additive constant
    GridSpec gspec{{-0.2, 0.2, -0.2, 0.2}, 21, 21, 1e-10};
    const SurfaceGrid grid = evaluate_grid(fx.pair, gspec);
    const double c0 = fx.reference_g(fx.pair.s0, fx.pair.t0) - fx.g_gauge * fx.pair.g_base;
    double g_err = 0.0, omega_err = 0.0;
    for (const auto& sm : grid.samples) {
        g_err = std::max(g_err, std::abs(fx.g_gauge * sm.g + c0 -
                                         fx.reference_g(sm.s, sm.t)));
        omega_err = std::max(omega_err, std::abs(fx.omega_gauge * sm.omega -
                                                 fx.reference_omega(sm.s, sm.t)));
    }
    out.push_back(check("g closed form (gauged)", g_err, 1e-8));
    out.push_back(check("omega closed form (gauged)", omega_err, 1e-12));

    // area oracle: chord_area/2 - g constant
    double dev_lo = std::numeric_limits<double>::infinity(), dev_hi = -dev_lo;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double s = -0.2 + 0.4 * i / 9.0, t = -0.2 + 0.4 * j / 9.0;
            const double v = 0.5 * chord_area(fx.pair, s, t) -
                             accumulate_g(fx.pair, s, t);
            dev_lo = std::min(dev_lo, v);
            dev_hi = std::max(dev_hi, v);
        }
    out.push_back(check("area/2 - g constant", dev_hi - dev_lo, 1e-8));

    // symmetry-set axis statements
    if (fx.aass_x_sign != 0) {
        AassOptions opts;
        opts.window = fx.symmetry_window;
        const AassResult aass = aass_solve(fx.pair, opts);
        double worst_x = 0.0, worst_y = 0.0;
        size_t count = 0;
        for (const auto& branch : aass.branches)
            for (const auto& sol : branch) {
                worst_x = std::max(worst_x, -fx.aass_x_sign * sol.midpoint.x);
                worst_y = std::max(worst_y, std::abs(sol.midpoint.y));
                ++count;
            }
        out.push_back(check("AASS midpoints on stated half-axis",
                            count > 0 ? worst_x : 1.0, 1e-9,
                            std::to_string(count) + " solutions"));
        out.push_back(check("AASS |midpoint.y|", worst_y, 1e-3));
    }
    if (fx.aess_x_sign != 0) {
        const AessResult aess = local_symmetry_points(fx.pair, fx.symmetry_window);
        double worst_x = 0.0, worst_y = 0.0;
        size_t count = 0;
        for (const auto& branch : aess.branches)
            for (const auto& p : branch) {
                if (!p.conic.center) continue;
                worst_x = std::max(worst_x, -fx.aess_x_sign * p.conic.center->x);
                worst_y = std::max(worst_y, std::abs(p.conic.center->y));
                ++count;
            }
        out.push_back(check("AESS centers on stated half-axis",
                            count > 0 ? worst_x : 1.0, 1e-9,
                            std::to_string(count) + " centers"));
        out.push_back(check("AESS |center.y|", worst_y, 1e-3));
    }
    return out;
}

}  // namespace affsphere
