#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "slfv/forward.hpp"
#include "slfv/geometry.hpp"
#include "slfv/rng.hpp"
#include "slfv/scaling.hpp"

namespace slfv {

/// Coefficients of the limiting (S)PDE
///   dw = (diffusion Lap w - reaction w(1-w)) dt + noise sqrt(w(1-w)) dW.
/// Fixed radius: diffusion = u Gamma_R / 2, reaction = u sigma V_R
/// (2Ru sigma in d=1), noise = 2Ru in d=1 and 0 otherwise.
struct PdeConfig {
    TorusDomain domain;
    double diffusion = 0.0;
    double reaction = 0.0;
    double noise = 0.0;
    double dx = 0.1;
    double dt = 1e-3;
    double horizon = 1.0;

    void validate() const {
        if (!(dx > 0.0) || !(dt > 0.0) || !(horizon >= 0.0))
            throw config_error("PdeConfig: dx, dt must be positive");
        if (diffusion < 0.0 || reaction < 0.0 || noise < 0.0)
            throw config_error("PdeConfig: coefficients must be >= 0");
        if (diffusion > 0.0) {
            const double cfl = dx * dx / (2.0 * domain.dimension * diffusion);
            if (dt > cfl)
                throw config_error("PdeConfig: dt violates the diffusion CFL bound dx^2/(2 d D)");
        }
    }
};

struct SolverResult {
    std::vector<double> times;
    std::vector<GridField> snapshots;
    std::uint64_t clamp_count = 0; // cells pushed back into [0,1]
};

namespace detail {

/// Periodic second difference, summed over axes.
inline void laplacian(const GridField& w, std::vector<double>& out) {
    const int m = w.cells_per_side;
    const double inv_h2 = 1.0 / (w.h * w.h);
    out.assign(w.size(), 0.0);
    const int d = w.dim();
    std::array<int, 3> idx{0, 0, 0};
    w.for_each_cell([&](std::size_t lin, const Point&) {
        // reconstruct the index from lin
        std::size_t rest = lin;
        for (int i = d - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(rest % static_cast<std::size_t>(m));
            rest /= static_cast<std::size_t>(m);
        }
        double acc = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            auto up = idx;
            auto dn = idx;
            up[axis] = (idx[axis] + 1) % m;
            dn[axis] = (idx[axis] + m - 1) % m;
            acc += w.data[w.linear(up)] + w.data[w.linear(dn)] - 2.0 * w.data[lin];
        }
        out[lin] = acc * inv_h2;
    });
}

} // namespace detail

/// Explicit Euler(-Maruyama) stepper shared by the deterministic and
/// stochastic solvers; with cfg.noise == 0 and any rng the trajectory is the
/// deterministic one. Wright-Fisher noise per cell:
/// noise * sqrt(w(1-w)) * N(0,1) * sqrt(dt/dx^d). Values clamped to [0,1].
inline SolverResult solve_fkpp_core(const PdeConfig& cfg, const GridField& w0,
                                    const std::vector<double>& sample_times, Rng* rng) {
    cfg.validate();
    if (cfg.noise > 0.0 && cfg.domain.dimension != 1)
        throw config_error("solve_fkpp: Wright-Fisher noise is defined for d=1 only");
    SolverResult out;
    GridField w = w0;
    std::vector<double> lap;
    const double noise_scale = cfg.noise * std::sqrt(cfg.dt / std::pow(cfg.dx, cfg.domain.dimension));
    double t = 0.0;
    std::size_t next_sample = 0;
    const auto record = [&](double now) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= now + 1e-12) {
            out.times.push_back(sample_times[next_sample]);
            out.snapshots.push_back(w);
            ++next_sample;
        }
    };
    record(t);
    const long steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-12));
    for (long s = 0; s < steps; ++s) {
        detail::laplacian(w, lap);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double v = w.data[i];
            double next = v + cfg.dt * (cfg.diffusion * lap[i] - cfg.reaction * v * (1.0 - v));
            if (noise_scale > 0.0) {
                const double var = std::max(v * (1.0 - v), 0.0);
                next += noise_scale * std::sqrt(var) * rng->normal();
            }
            if (next < 0.0) {
                next = 0.0;
                ++out.clamp_count;
            } else if (next > 1.0) {
                next = 1.0;
                ++out.clamp_count;
            }
            w.data[i] = next;
        }
        t = static_cast<double>(s + 1) * cfg.dt;
        record(t);
    }
    record(cfg.horizon + 1.0); // flush trailing sample times
    return out;
}

inline SolverResult solve_fkpp(const PdeConfig& cfg, const GridField& w0,
                               const std::vector<double>& sample_times) {
    PdeConfig det = cfg;
    det.noise = 0.0;
    return solve_fkpp_core(det, w0, sample_times, nullptr);
}

inline SolverResult solve_fkpp_stochastic_1d(const PdeConfig& cfg, const GridField& w0,
                                             const std::vector<double>& sample_times, Rng& rng) {
    return solve_fkpp_core(cfg, w0, sample_times, &rng);
}

/// Fractional Fisher-KPP: exact exponential step for the spectral part
/// exp(u psi(theta_k) dt), explicit reaction (+ Wright-Fisher noise in d=1),
/// clamped to [0,1].
inline SolverResult solve_fractional_fkpp(const PdeConfig& cfg, const KernelSpec& spec,
                                          const GridField& w0, const std::vector<double>& sample_times,
                                          Rng* rng = nullptr) {
    if (!(cfg.dt > 0.0)) throw config_error("solve_fractional_fkpp: dt must be positive");
    if (w0.size() != spec.cell_count())
        throw config_error("solve_fractional_fkpp: grid does not match the kernel spec");
    if (cfg.noise > 0.0 && cfg.domain.dimension != 1)
        throw config_error("solve_fractional_fkpp: noise is defined for d=1 only");
    if (cfg.noise > 0.0 && rng == nullptr)
        throw config_error("solve_fractional_fkpp: noise requires an rng");
    spec.warn_if_under_resolved(cfg.dt);
    SolverResult out;
    GridField w = w0;
    const std::size_t n = w.size();
    std::vector<double> decay(n);
    for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(spec.multiplier[i] * cfg.dt);
    std::vector<std::complex<double>> buf(n);
    const double noise_scale = cfg.noise * std::sqrt(cfg.dt / std::pow(w.h, w.dim()));
    double t = 0.0;
    std::size_t next_sample = 0;
    const auto record = [&](double now) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= now + 1e-12) {
            out.times.push_back(sample_times[next_sample]);
            out.snapshots.push_back(w);
            ++next_sample;
        }
    };
    record(t);
    const long steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-12));
    for (long s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) buf[i] = w.data[i];
        if (spec.d == 1) fft(buf, false);
        else fft_2d(buf, spec.shape[0], spec.shape[1], false);
        for (std::size_t i = 0; i < n; ++i) buf[i] *= decay[i];
        if (spec.d == 1) fft(buf, true);
        else fft_2d(buf, spec.shape[0], spec.shape[1], true);
        for (std::size_t i = 0; i < n; ++i) {
            double next = buf[i].real();
            const double v = next;
            next -= cfg.dt * cfg.reaction * v * (1.0 - v);
            if (noise_scale > 0.0) {
                const double var = std::max(v * (1.0 - v), 0.0);
                next += noise_scale * std::sqrt(var) * rng->normal();
            }
            if (next < 0.0) {
                next = 0.0;
                ++out.clamp_count;
            } else if (next > 1.0) {
                next = 1.0;
                ++out.clamp_count;
            }
            w.data[i] = next;
        }
        t = static_cast<double>(s + 1) * cfg.dt;
        record(t);
    }
    record(cfg.horizon + 1.0);
    return out;
}

/// Limit dual of the rescaled lineage system: independent Brownian (or
/// symmetric alpha-stable) motions branching at a constant rate; in d=1
/// pairs coalesce at coal_rate times their local time together, realized by
/// the epsilon-band occupation approximation dt/(2 eps).
struct LimitDualConfig {
    int dimension = 1;
    bool stable = false;
    double diffusion_variance = 1.0; // Brownian variance parameter (per coordinate)
    double alpha = 1.5;              // stable index
    double stable_scale = 1.0;       // c in -psi(theta) = c |theta|^alpha
    double branch_rate = 0.0;
    double coal_rate = 0.0; // used in d=1 only
    double band_eps = 0.05;
    double dt = 1e-3;

    void validate() const {
        if (dimension < 1 || dimension > kMaxDim)
            throw config_error("LimitDualConfig: dimension must be 1, 2 or 3");
        if (!(dt > 0.0)) throw config_error("LimitDualConfig: dt must be positive");
        if (dimension == 1 && coal_rate > 0.0 && !(band_eps > 0.0))
            throw config_error("LimitDualConfig: band_eps must be positive in d=1");
        if (stable && (!(alpha > 1.0) || !(alpha < 2.0)))
            throw config_error("LimitDualConfig: alpha must be in (1,2)");
    }
};

struct LimitDualResult {
    std::vector<double> times;
    std::vector<std::size_t> particle_counts;
    std::vector<std::vector<Point>> positions;
};

inline LimitDualResult simulate_limit_dual(const LimitDualConfig& cfg,
                                           const std::vector<Point>& initial, double horizon,
                                           const std::vector<double>& sample_times, Rng& rng,
                                           bool record_positions = false) {
    cfg.validate();
    if (initial.empty()) throw config_error("simulate_limit_dual: need at least one particle");
    std::vector<Point> particles = initial;
    LimitDualResult out;
    const int d = cfg.dimension;
    const double step_sd = std::sqrt(cfg.diffusion_variance * cfg.dt);
    const double branch_p = 1.0 - std::exp(-cfg.branch_rate * cfg.dt);
    // coalescence probability per pair in the band, local time dt/(2 eps)
    const double coal_p = cfg.dimension == 1 ? cfg.coal_rate * cfg.dt / (2.0 * cfg.band_eps) : 0.0;
    const double stable_step = cfg.stable ? std::pow(cfg.stable_scale * cfg.dt, 1.0 / cfg.alpha) : 0.0;

    double t = 0.0;
    std::size_t next_sample = 0;
    const auto record = [&](double now) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= now + 1e-12) {
            out.times.push_back(sample_times[next_sample]);
            out.particle_counts.push_back(particles.size());
            if (record_positions) out.positions.push_back(particles);
            ++next_sample;
        }
    };
    record(t);
    const long steps = static_cast<long>(std::ceil(horizon / cfg.dt - 1e-12));
    for (long s = 0; s < steps; ++s) {
        // move
        for (auto& p : particles) {
            if (!cfg.stable) {
                for (int i = 0; i < d; ++i) p[i] += step_sd * rng.normal();
            } else if (d == 1) {
                p[0] += stable_step * rng.symmetric_stable(cfg.alpha);
            } else {
                // isotropic stable by Brownian subordination:
                // sqrt(2 S) Z with S positive (alpha/2)-stable
                const double sub = rng.positive_stable(0.5 * cfg.alpha);
                const double sd = stable_step * std::sqrt(2.0 * sub);
                for (int i = 0; i < d; ++i) p[i] += sd * rng.normal();
            }
        }
        // branch
        const std::size_t n_before = particles.size();
        for (std::size_t i = 0; i < n_before; ++i)
            if (rng.bernoulli(branch_p)) particles.push_back(particles[i]);
        // coalesce (d=1): each close pair independently
        if (coal_p > 0.0 && particles.size() > 1) {
            std::vector<bool> dead(particles.size(), false);
            for (std::size_t i = 0; i < particles.size(); ++i) {
                if (dead[i]) continue;
                for (std::size_t j = i + 1; j < particles.size(); ++j) {
                    if (dead[j]) continue;
                    if (std::abs(particles[i][0] - particles[j][0]) < cfg.band_eps &&
                        rng.bernoulli(coal_p)) {
                        dead[j] = true;
                    }
                }
            }
            std::vector<Point> alive;
            alive.reserve(particles.size());
            for (std::size_t i = 0; i < particles.size(); ++i)
                if (!dead[i]) alive.push_back(particles[i]);
            particles.swap(alive);
        }
        t = static_cast<double>(s + 1) * cfg.dt;
        record(t);
    }
    record(horizon + 1.0);
    return out;
}

} // namespace slfv
