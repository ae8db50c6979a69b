#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "slfv/geometry.hpp"

namespace slfv {

/// SplitMix64 step; used to derive independent replicate seeds from
/// (base seed, replicate index) so that parallel scheduling cannot change
/// any stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

/// Replicate-local random stream. Each replicate owns one; never shared
/// across threads.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }

    double uniform() { return unit_(engine_); }
    double uniform(double a, double b) { return a + (b - a) * unit_(engine_); }

    /// Uniform in (0,1), excluding both endpoints.
    double uniform_open() {
        double v;
        do {
            v = unit_(engine_);
        } while (v <= 0.0 || v >= 1.0);
        return v;
    }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    double normal() { return normal_(engine_); }

    bool bernoulli(double p) { return unit_(engine_) < p; }

    /// Uniform point in the d-ball B(c, r) by rejection from the bounding box.
    Point uniform_in_ball(const Point& c, double r, int d) {
        Point p{0.0, 0.0, 0.0};
        while (true) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                double v = uniform(-r, r);
                p[i] = v;
                s += v * v;
            }
            if (s <= r * r) break;
        }
        for (int i = 0; i < d; ++i) p[i] += c[i];
        return p;
    }

    Point uniform_in_box(const TorusDomain& domain) {
        Point p{0.0, 0.0, 0.0};
        for (int i = 0; i < domain.dimension; ++i) p[i] = uniform(0.0, domain.side_length);
        return p;
    }

    /// Standard symmetric alpha-stable draw (Chambers-Mallows-Stuck),
    /// E[exp(i theta X)] = exp(-|theta|^alpha). Valid for alpha in (0,2).
    double symmetric_stable(double alpha) {
        const double v = uniform(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
        const double w = exponential(1.0);
        const double a = alpha * v;
        return (std::sin(a) / std::pow(std::cos(v), 1.0 / alpha)) *
               std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
    }

    /// Positive (one-sided) stable draw with Laplace transform
    /// E[exp(-lambda S)] = exp(-lambda^rho), rho in (0,1). Kanter's method.
    double positive_stable(double rho) {
        double u;
        do {
            u = uniform(0.0, std::numbers::pi);
        } while (u <= 0.0);
        const double w = exponential(1.0);
        const double a = std::pow(std::sin(rho * u), rho / (1.0 - rho)) *
                         std::sin((1.0 - rho) * u) /
                         std::pow(std::sin(u), 1.0 / (1.0 - rho));
        return std::pow(a / w, (1.0 - rho) / rho);
    }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace slfv
