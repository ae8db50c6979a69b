#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "slfv/geometry.hpp"
#include "slfv/rng.hpp"

namespace slfv {

/// Analytic test function f against which <w,f> is recorded. Families:
/// a truncated Gaussian bump, the indicator of a ball, and a periodic
/// cosine mode (support = whole torus).
struct ObservableSpec {
    enum class Family { gaussian_bump, ball_indicator, cosine_mode };

    Family family = Family::ball_indicator;
    Point center{0.0, 0.0, 0.0};
    double amplitude = 1.0;
    double radius = 1.0; // support radius (gaussian truncation / ball radius)
    double width = 0.5;  // gaussian standard deviation
    std::array<int, 3> mode{1, 0, 0}; // cosine wavenumbers

    void validate(const TorusDomain& domain) const {
        if (family != Family::cosine_mode) {
            if (!(radius > 0.0)) throw config_error("ObservableSpec: support radius must be positive");
            if (radius > 0.5 * domain.side_length)
                throw config_error("ObservableSpec: support does not fit in the domain");
            if (family == Family::gaussian_bump && !(width > 0.0))
                throw config_error("ObservableSpec: gaussian width must be positive");
        }
        if (!domain.contains(domain.wrap(center)))
            throw config_error("ObservableSpec: center outside domain");
    }

    double operator()(const Point& x, const TorusDomain& domain) const {
        switch (family) {
            case Family::gaussian_bump: {
                const double r2 = domain.distance_squared(x, center);
                if (r2 > radius * radius) return 0.0;
                return amplitude * std::exp(-0.5 * r2 / (width * width));
            }
            case Family::ball_indicator: {
                const double r2 = domain.distance_squared(x, center);
                return r2 <= radius * radius ? amplitude : 0.0;
            }
            default: {
                double phase = 0.0;
                for (int i = 0; i < domain.dimension; ++i)
                    phase += 2.0 * std::numbers::pi * mode[i] * (x[i] - center[i]) / domain.side_length;
                return amplitude * std::cos(phase);
            }
        }
    }

    bool nonnegative() const { return family != Family::cosine_mode && amplitude > 0.0; }

    /// Rejection sample x with density proportional to f (requires f >= 0).
    Point sample(const TorusDomain& domain, Rng& rng) const {
        if (!nonnegative())
            throw input_error("ObservableSpec: sampling requires a nonnegative family");
        while (true) {
            Point p = rng.uniform_in_ball(center, radius, domain.dimension);
            p = domain.wrap(p);
            const double v = (*this)(p, domain);
            if (v <= 0.0) continue;
            if (rng.uniform() * amplitude <= v) return p;
        }
    }
};

/// Initial allele-frequency profiles.
struct InitialFieldSpec {
    enum class Kind { constant, half_torus, gaussian_bump, cosine };

    Kind kind = Kind::constant;
    double level = 0.5;     // constant value / bump peak / cosine midline
    double amplitude = 0.4; // cosine amplitude
    Point center{0.0, 0.0, 0.0};
    double width = 1.0; // gaussian bump standard deviation
    int mode = 1;       // cosine wavenumber along axis 0

    double operator()(const Point& x, const TorusDomain& domain) const {
        double v = 0.0;
        switch (kind) {
            case Kind::constant:
                v = level;
                break;
            case Kind::half_torus:
                v = x[0] < 0.5 * domain.side_length ? 1.0 : 0.0;
                break;
            case Kind::gaussian_bump: {
                const double r2 = domain.distance_squared(x, center);
                v = level * std::exp(-0.5 * r2 / (width * width));
                break;
            }
            case Kind::cosine:
                v = level + amplitude *
                                std::cos(2.0 * std::numbers::pi * mode * x[0] / domain.side_length);
                break;
        }
        return std::min(1.0, std::max(0.0, v));
    }
};

} // namespace slfv
