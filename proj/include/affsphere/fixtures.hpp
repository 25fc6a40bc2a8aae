#pragma once

#include <functional>
#include <string>
#include <vector>

#include "affsphere/area_distance.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// Built-in curve pairs with machine-checkable expectations. Expectations are
// residual functions over traced data rather than point lists, so trace
// resolution can vary. Published reference values for a fixture may live in
// the opposite orientation convention and a different normalization of g;
// the gauge fields record the fixed translation into ours.
struct Fixture {
    std::string name;
    CurvePair pair;
    Window default_window;    // trace window for the singular set
    Window classify_window;   // window on which the swallowtail census holds
    Window symmetry_window;   // AASS / AESS search window
    double trace_step = 1e-3;

    // |implicit equation| of the singular set, evaluated on traced points
    std::function<double(double, double)> singular_residual;
    // expected swallowtail locations inside classify_window
    std::vector<Vec2> swallowtails;
    // expected lambda as a function of (s,t) on the singular set
    std::function<double(double, double)> lambda_law;
    // reference closed form of g and the gauge: reference = g_gauge * g + const
    std::function<double(double, double)> reference_g;
    double g_gauge = 1.0;
    // reference omega = omega_gauge * omega
    std::function<double(double, double)> reference_omega;
    double omega_gauge = 1.0;

    // axis statements for the symmetry sets (zero when not applicable):
    // sign of midpoint.x on the AASS and of center.x on the AESS near origin
    int aass_x_sign = 0;
    int aess_x_sign = 0;
};

const Fixture& fixture(const std::string& name);  // throws Config for unknown names
std::vector<std::string> fixture_names();

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // achieved metric
    double threshold = 0.0;  // bound it was held against
    std::string detail;
};

// Full expectation suite for one fixture (drives the selftest command).
std::vector<CheckResult> run_fixture_checks(const Fixture& fx);

}  // namespace affsphere
