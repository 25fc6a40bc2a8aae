#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace affsphere {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator/(double c) const { return {x / c, y / c}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

// Determinant of two planar vectors, [u,v] = u.x*v.y - u.y*v.x.
// This orientation is fixed globally; everything downstream depends on it.
inline double det2(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }

// Anticlockwise rotation by ninety degrees: (x,y) -> (-y,x).
inline Vec2 perp(const Vec2& u) { return {-u.y, u.x}; }

// det2(u, perp(u)) == |u|^2 with the two conventions above.

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    Vec3(const Vec2& xy, double z_) : x(xy.x), y(xy.y), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) +
           a.z * (b.x * c.y - b.y * c.x);
}

// Real cube root preserving sign: cbrt(-8) = -2.
inline double real_cbrt(double v) { return std::cbrt(v); }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double u, double eps = 1e-12) const {
        return u >= lo - eps && u <= hi + eps;
    }
    double clamp(double u) const { return std::min(hi, std::max(lo, u)); }
};

struct Window {
    double s_lo = 0.0, s_hi = 0.0;
    double t_lo = 0.0, t_hi = 0.0;

    bool contains(double s, double t, double eps = 0.0) const {
        return s >= s_lo - eps && s <= s_hi + eps && t >= t_lo - eps && t <= t_hi + eps;
    }
    Interval s_range() const { return {s_lo, s_hi}; }
    Interval t_range() const { return {t_lo, t_hi}; }
};

enum class ErrorKind {
    Config,
    ParamOutOfDomain,
    SingularParameterization,
    InflectionInDomain,
    QuadratureFailure,
    SingularMatrix,
    SingularRegion,
    NotAsymptotic,
    ContinuationStall,
    NotOnE,
    DegenerateConic,
    CoincidentTangentLines,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace affsphere
