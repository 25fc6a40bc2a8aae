#include "affsphere/conic.hpp"

#include <cmath>

namespace affsphere {

const char* conic_kind_name(Conic::Kind kind) {
    switch (kind) {
        case Conic::Kind::Ellipse: return "Ellipse";
        case Conic::Kind::Hyperbola: return "Hyperbola";
        case Conic::Kind::Parabola: return "Parabola";
        case Conic::Kind::DegeneratePair: return "DegeneratePair";
    }
    return "Ellipse";
}

Conic classify_conic(const std::array<double, 6>& raw) {
    double norm = 0.0;
    for (double c : raw) norm += c * c;
    norm = std::sqrt(norm);
    if (norm < 1e-300) fail(ErrorKind::DegenerateConic, "zero conic coefficients");

    Conic conic;
    for (size_t i = 0; i < 6; ++i) conic.coeffs[i] = raw[i] / norm;
    const double q11 = conic.coeffs[0], q12 = conic.coeffs[1], q22 = conic.coeffs[2];
    const double q13 = conic.coeffs[3], q23 = conic.coeffs[4], q33 = conic.coeffs[5];

    // determinant of the full symmetric 3x3 matrix: zero iff a line pair
    const double full_det = q11 * (q22 * q33 - q23 * q23) -
                            q12 * (q12 * q33 - q23 * q13) +
                            q13 * (q12 * q23 - q22 * q13);
    const double disc = q11 * q22 - q12 * q12;
    constexpr double kDegenerateTol = 1e-10;
    constexpr double kParabolaTol = 1e-12;

    if (std::abs(full_det) < kDegenerateTol && std::abs(disc) < kDegenerateTol) {
        conic.kind = Conic::Kind::DegeneratePair;
        return conic;
    }
    if (std::abs(disc) < kParabolaTol) {
        conic.kind = std::abs(full_det) < kDegenerateTol ? Conic::Kind::DegeneratePair
                                                         : Conic::Kind::Parabola;
        // axis: null direction of the quadratic part
        conic.axis_dir = std::abs(q11) >= std::abs(q22) ? Vec2{-q12, q11}
                                                        : Vec2{-q22, q12};
        const double an = conic.axis_dir.norm();
        if (an > 0.0) conic.axis_dir = conic.axis_dir / an;
        return conic;
    }
    conic.kind = std::abs(full_det) < kDegenerateTol
                     ? Conic::Kind::DegeneratePair
                     : (disc > 0.0 ? Conic::Kind::Ellipse : Conic::Kind::Hyperbola);
    // center solves the gradient system [q11 q12; q12 q22] c = -(q13, q23)
    conic.center = Vec2{(-q13 * q22 + q23 * q12) / disc,
                        (-q23 * q11 + q13 * q12) / disc};
    return conic;
}

}  // namespace affsphere
