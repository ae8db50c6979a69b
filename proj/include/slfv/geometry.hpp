#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "slfv/errors.hpp"

namespace slfv {

/// Spatial point. Dimension is carried by the surrounding domain; unused
/// coordinates stay zero.
using Point = std::array<double, 3>;

inline constexpr int kMaxDim = 3;

/// Periodic box [0,L)^d. Stands in for R^d: reproduction events must have
/// radius at most L/4 so a ball never overlaps its own periodic image.
struct TorusDomain {
    int dimension = 1;
    double side_length = 1.0;

    TorusDomain() = default;
    TorusDomain(int d, double L) : dimension(d), side_length(L) {
        if (d < 1 || d > kMaxDim)
            throw config_error("TorusDomain: dimension must be 1, 2 or 3, got " + std::to_string(d));
        if (!(L > 0.0))
            throw config_error("TorusDomain: side_length must be positive");
    }

    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dimension; ++i) v *= side_length;
        return v;
    }

    /// Largest event radius the wrap convention supports.
    double max_event_radius() const { return side_length / 4.0; }

    double wrap_coord(double x) const {
        double y = std::fmod(x, side_length);
        if (y < 0.0) y += side_length;
        // fmod can return side_length after the negative adjustment when x
        // is a tiny negative number.
        if (y >= side_length) y = 0.0;
        return y;
    }

    Point wrap(Point p) const {
        for (int i = 0; i < dimension; ++i) p[i] = wrap_coord(p[i]);
        return p;
    }

    bool contains(const Point& p) const {
        for (int i = 0; i < dimension; ++i)
            if (p[i] < 0.0 || p[i] >= side_length) return false;
        return true;
    }

    /// Signed minimum-image difference x - y, each component in [-L/2, L/2).
    Point min_image_diff(const Point& x, const Point& y) const {
        Point d{0.0, 0.0, 0.0};
        for (int i = 0; i < dimension; ++i) {
            double v = x[i] - y[i];
            if (v >= 0.5 * side_length) v -= side_length;
            else if (v < -0.5 * side_length) v += side_length;
            d[i] = v;
        }
        return d;
    }

    double distance_squared(const Point& x, const Point& y) const {
        Point d = min_image_diff(x, y);
        double s = 0.0;
        for (int i = 0; i < dimension; ++i) s += d[i] * d[i];
        return s;
    }

    double distance(const Point& x, const Point& y) const { return std::sqrt(distance_squared(x, y)); }
};

/// Volume of a d-ball of radius r: pi^{d/2} r^d / Gamma(d/2+1).
inline double ball_volume(int d, double r) {
    if (d < 1 || d > kMaxDim)
        throw config_error("ball_volume: dimension must be 1, 2 or 3, got " + std::to_string(d));
    if (!(r > 0.0)) throw input_error("ball_volume: radius must be positive");
    return std::pow(std::numbers::pi, 0.5 * d) * std::pow(r, d) / std::tgamma(0.5 * d + 1.0);
}

/// Volume of the lens B(x,r) ∩ B(y,r) with m = |x-y|. Exact closed forms,
/// d <= 3. Zero once m >= 2r, the full ball volume at m = 0.
inline double ball_intersection_volume(int d, double r, double m) {
    if (d < 1 || d > kMaxDim)
        throw config_error("ball_intersection_volume: dimension must be 1, 2 or 3");
    if (!(r > 0.0)) throw input_error("ball_intersection_volume: radius must be positive");
    if (m < 0.0) throw input_error("ball_intersection_volume: separation must be >= 0");
    if (m >= 2.0 * r) return 0.0;
    switch (d) {
        case 1:
            return 2.0 * r - m;
        case 2:
            return 2.0 * r * r * std::acos(m / (2.0 * r)) - 0.5 * m * std::sqrt(4.0 * r * r - m * m);
        default: {
            // Two spherical caps of height r - m/2.
            const double t = 2.0 * r - m;
            return std::numbers::pi * t * t * (4.0 * r + m) / 12.0;
        }
    }
}

/// Lens volume as a fraction of the ball volume, parameterized by
/// s = m / (2r) in [0,1]. Dimensionless: V_r(x,y)/V_r depends on m/r only.
inline double lens_fraction(int d, double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    switch (d) {
        case 1:
            return 1.0 - s;
        case 2:
            return (2.0 / std::numbers::pi) * (std::acos(s) - s * std::sqrt(1.0 - s * s));
        default:
            return 1.0 - 1.5 * s + 0.5 * s * s * s;
    }
}

/// Minimum-image Euclidean distance between two points of the torus.
inline double torus_distance(const Point& x, const Point& y, const TorusDomain& domain) {
    if (!domain.contains(x) || !domain.contains(y))
        throw input_error("torus_distance: coordinates must lie in [0,L)^d");
    return domain.distance(x, y);
}

} // namespace slfv
