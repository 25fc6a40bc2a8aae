#pragma once

#include <string>
#include <vector>

#include "affsphere/affine_sphere.hpp"
#include "affsphere/curve.hpp"
#include "affsphere/grid.hpp"
#include "affsphere/singular.hpp"
#include "affsphere/symmetry.hpp"

namespace affsphere {

// All emitters are deterministic: fixed float formatting ("%.17g"), sorted
// emission order, no timestamps.

std::string format_double(double v);

// CSV with header s,t,x,y,g,omega.
void write_grid_csv(const SurfaceGrid& grid, const std::string& path);
// CSV of the full per-sample record.
void write_samples_csv(const SurfaceGrid& grid, const std::string& path);
// JSON with full sample records.
void write_grid_json(const SurfaceGrid& grid, const std::string& path);
// Triangle mesh of q(s,t); vertices within singular_tol of the singular set
// are listed in the sidecar JSON.
void write_obj(const SurfaceGrid& grid, const std::string& obj_path,
               const std::string& sidecar_path, double singular_tol = 1e-6);

void write_singular_json(const SingularSetResult& result, const std::string& path);
void write_evolute_csv(const SingularSetResult& result, const std::string& path);
void write_evolute_svg(const CurvePair& pair, const SingularSetResult& result,
                       const std::string& path);

void write_symmetry_json(const AassResult& aass, const AessResult& aess,
                         const std::string& path);
void write_symmetry_csv(const AassResult& aass, const AessResult& aess,
                        const std::string& path);
// Combined figure: both curves, area evolute, AASS midpoints, AESS centers
// and a sample of midlines.
void write_overlay_svg(const CurvePair& pair, const SingularSetResult& singular,
                       const AassResult& aass, const AessResult& aess,
                       const std::string& path);

// Curve definition file: {"backend": "polynomial", "x_coeffs": [...],
// "y_coeffs": [...], "domain": [lo, hi]} or {"backend": "samples",
// "samples": [[u, x, y], ...]}.
PlanarCurve load_curve_json(const std::string& path);

struct LoadedGrid {
    std::vector<double> s_values, t_values;
    std::vector<Vec2> x;
    std::vector<double> g;
    std::vector<Vec2> n;
    bool has_n = false;
};

LoadedGrid load_grid_csv(const std::string& path);
LoadedGrid load_grid_json(const std::string& path);

}  // namespace affsphere
