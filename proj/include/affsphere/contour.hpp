#pragma once

#include <functional>
#include <vector>

#include "affsphere/grid.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// Scalar field on the parameter plane with its gradient.
struct ScalarField {
    std::function<double(double, double)> f;
    std::function<std::pair<double, double>(double, double)> grad;
};

struct TraceOptions {
    Window window;
    int seed_ns = 96;            // sign-grid resolution for seeding
    int seed_nt = 96;
    double step = 1e-3;          // marching step in (s,t) arc length
    double tol = 1e-9;           // |f| bound for every emitted point
    double degenerate_tol = 1e-7;  // |grad f| below this stops refinement
    int max_points = 200000;
};

struct TracedBranch {
    std::vector<Vec2> points;  // (s,t) samples, consecutive within step
    bool closed = false;
    bool clipped = false;  // stopped at the window boundary or a degenerate zone
};

struct TraceResult {
    std::vector<TracedBranch> branches;
    int degenerate_seeds = 0;   // seeds abandoned at |grad f| ~ 0
    bool degenerate_field = false;  // f vanishes over most of the window
};

// Traces all components of {f = 0} inside the window: marching-squares cells
// seed Newton-refined start points, which are continued by a tangent
// predictor (-f_t, f_s) and Newton corrector. Field sampling for seeding is
// the only parallel part; branch order is deterministic (row-major seeds).
TraceResult trace_zero_set(const ScalarField& field, const TraceOptions& opts,
                           Exec exec = Exec::Parallel);

}  // namespace affsphere
