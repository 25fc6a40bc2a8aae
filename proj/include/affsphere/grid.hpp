#pragma once

#include <functional>
#include <vector>

#include "affsphere/area_distance.hpp"
#include "affsphere/types.hpp"

namespace affsphere {

// Kernel execution policy. Parallel kernels partition work so that every
// element is produced by exactly one deterministic computation; results are
// bitwise identical to the serial reference for any thread count.
enum class Exec { Serial, Parallel };

struct GridSpec {
    Window window;
    int ns = 2;
    int nt = 2;
    double quad_tol = 1e-10;
};

struct SurfaceGrid {
    GridSpec spec;
    std::vector<double> s_values;  // size ns
    std::vector<double> t_values;  // size nt
    std::vector<SurfaceSample> samples;  // row-major, index i*nt + j

    const SurfaceSample& at(int i, int j) const {
        return samples[static_cast<size_t>(i) * static_cast<size_t>(spec.nt) +
                       static_cast<size_t>(j)];
    }
    SurfaceSample& at(int i, int j) {
        return samples[static_cast<size_t>(i) * static_cast<size_t>(spec.nt) +
                       static_cast<size_t>(j)];
    }
};

// Evaluates the full sample grid. g comes from 1-D cumulative quadrature along
// grid lines from the base (one s leg on the base row, then one t leg per
// column), so the total cost is O(ns*nt) short integrals. Columns are
// independent; the parallel kernel splits over them.
SurfaceGrid evaluate_grid(const CurvePair& pair, const GridSpec& spec,
                          Exec exec = Exec::Parallel);

// Serial reference for the kernel above (plain loops, same arithmetic).
SurfaceGrid evaluate_grid_serial(const CurvePair& pair, const GridSpec& spec);

// Samples f on an (ns x nt) lattice over the window, row-major.
std::vector<double> sample_field(const std::function<double(double, double)>& f,
                                 const Window& window, int ns, int nt,
                                 Exec exec = Exec::Parallel);
std::vector<double> sample_field_serial(const std::function<double(double, double)>& f,
                                        const Window& window, int ns, int nt);

}  // namespace affsphere
