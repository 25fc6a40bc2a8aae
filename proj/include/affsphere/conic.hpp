#pragma once

#include <array>
#include <optional>

#include "affsphere/types.hpp"

namespace affsphere {

// Planar conic q11 x^2 + 2 q12 xy + q22 y^2 + 2 q13 x + 2 q23 y + q33 = 0,
// coefficients defined up to scale (stored normalized to unit length).
struct Conic {
    enum class Kind { Ellipse, Hyperbola, Parabola, DegeneratePair };

    std::array<double, 6> coeffs{};  // q11, q12, q22, q13, q23, q33
    Kind kind = Kind::Ellipse;
    std::optional<Vec2> center;  // nullopt: center at infinity (parabola)
    Vec2 axis_dir;               // direction to the infinite center, if any

    double evaluate(const Vec2& p) const {
        return coeffs[0] * p.x * p.x + 2.0 * coeffs[1] * p.x * p.y +
               coeffs[2] * p.y * p.y + 2.0 * coeffs[3] * p.x + 2.0 * coeffs[4] * p.y +
               coeffs[5];
    }
};

const char* conic_kind_name(Conic::Kind kind);

// Classifies raw coefficients: normalizes, derives center/kind; throws
// DegenerateConic only for an all-zero vector.
Conic classify_conic(const std::array<double, 6>& raw);

}  // namespace affsphere
