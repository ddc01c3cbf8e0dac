#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace qmcf {

// Absolute tolerance for box-membership comparisons; a point exactly on a
// closed-box boundary (within this tolerance) counts as inside.
inline constexpr double kBoxTol = 1e-12;

inline constexpr double kPhi = 1.6180339887498949;
inline constexpr double kInvPhi = 0.61803398874989485;
inline constexpr double kSqrt2 = 1.4142135623730951;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Column-major 2x2 matrix: columns are the generator vectors.
struct Mat2 {
    // [[a, b], [c, d]] means first column (a, c), second column (b, d).
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    Vec2 col0() const { return {a, c}; }
    Vec2 col1() const { return {b, d}; }
    double det() const { return a * d - b * c; }

    Vec2 apply(double m, double n) const { return {a * m + b * n, c * m + d * n}; }
    Vec2 apply(const Vec2& v) const { return apply(v.x, v.y); }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw std::invalid_argument("Mat2::inverse: singular matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

// Closed axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }

    bool contains(const Vec2& p, double tol = kBoxTol) const {
        return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
    }

    Rect inflated(double m) const { return {x0 - m, x1 + m, y0 - m, y1 + m}; }

    static Rect unit_square_at(const Vec2& rho) { return {rho.x, rho.x + 1.0, rho.y, rho.y + 1.0}; }
};

}  // namespace qmcf
