#pragma once

#include <cmath>

namespace levelband {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    /// Rotation by -90 degrees: (x, y) -> (y, -x).
    Vec2 rot_cw() const { return {y, -x}; }
    /// Rotation by +90 degrees: (x, y) -> (-y, x).
    Vec2 rot_ccw() const { return {-y, x}; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Point2 operator+(const Point2& p, const Vec2& v) { return {p.x + v.x, p.y + v.y}; }
inline Point2 operator-(const Point2& p, const Vec2& v) { return {p.x - v.x, p.y - v.y}; }
inline Vec2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }

/// Symmetric 2x2 matrix; the off-diagonal entry is stored once, so
/// symmetry holds by construction.
struct SymMat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    /// Quadratic form v . (M v).
    double quad(const Vec2& v) const {
        return xx * v.x * v.x + 2.0 * xy * v.x * v.y + yy * v.y * v.y;
    }
    double det() const { return xx * yy - xy * xy; }
    double max_abs() const {
        const double a = std::fabs(xx), b = std::fabs(xy), c = std::fabs(yy);
        return std::fmax(a, std::fmax(b, c));
    }
    /// Eigenvalues in ascending order (closed form for symmetric 2x2).
    void eigenvalues(double& lo, double& hi) const {
        const double mean = 0.5 * (xx + yy);
        const double r = std::hypot(0.5 * (xx - yy), xy);
        lo = mean - r;
        hi = mean + r;
    }
    bool finite() const {
        return std::isfinite(xx) && std::isfinite(xy) && std::isfinite(yy);
    }
};

/// Value, gradient and Hessian of a field at one point.
struct Jet2 {
    double value = 0.0;
    Vec2 grad;
    SymMat2 hess;
    bool finite() const { return std::isfinite(value) && grad.finite() && hess.finite(); }
};

/// Axis-aligned rectangle; the bounded stand-in for the field's domain.
struct Window {
    double xmin = -1.0;
    double xmax = 1.0;
    double ymin = -1.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diagonal() const { return std::hypot(width(), height()); }
    bool valid() const {
        return std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) &&
               std::isfinite(ymax) && xmin < xmax && ymin < ymax;
    }
    bool contains(const Point2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Point2 clamp(const Point2& p) const {
        return {std::fmin(std::fmax(p.x, xmin), xmax), std::fmin(std::fmax(p.y, ymin), ymax)};
    }
};

} // namespace levelband
