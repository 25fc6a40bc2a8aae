#pragma once

#include <functional>

#include "affsphere/types.hpp"

namespace affsphere {

// Adaptive Gauss-Kronrod integration of f over [a, b] (a > b allowed).
// tol is an absolute target on unit-scale data; throws QuadratureFailure when
// the error estimate cannot be brought under it.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

}  // namespace affsphere
