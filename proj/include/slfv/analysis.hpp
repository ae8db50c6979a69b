#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slfv/dual.hpp"
#include "slfv/forward.hpp"
#include "slfv/quadrature.hpp"
#include "slfv/rng.hpp"

namespace slfv {

/// One Monte Carlo estimate with its error bar; reproducible from
/// (seed, meta).
struct McReport {
    double estimate = 0.0;
    double std_error = 0.0;
    long n_replicates = 0;
    std::uint64_t seed = 0;
    std::string meta;
};

inline std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n * (n - 1.0)))};
}

/// Sample variance and its standard error (from the fourth moment).
inline std::pair<double, double> variance_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    const double var = m2 * n / (n - 1.0);
    const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return {var, se};
}

inline double z_score(const McReport& a, const McReport& b) {
    const double denom = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    if (denom == 0.0) return a.estimate == b.estimate ? 0.0 : std::numeric_limits<double>::infinity();
    return (a.estimate - b.estimate) / denom;
}

/// Hill estimator of the tail index from the k largest order statistics.
inline double hill_estimator(std::vector<double> xs, std::size_t k) {
    if (k + 1 > xs.size()) throw input_error("hill_estimator: need k+1 samples");
    std::nth_element(xs.begin(), xs.begin() + static_cast<long>(k), xs.end(), std::greater<>());
    std::sort(xs.begin(), xs.begin() + static_cast<long>(k + 1), std::greater<>());
    const double pivot = xs[k];
    if (!(pivot > 0.0)) throw input_error("hill_estimator: samples must be positive");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(xs[i] / pivot);
    return static_cast<double>(k) / acc;
}

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 l^2).
inline double ks_tail(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

/// One-sample KS p-value against a supplied CDF.
template <typename Cdf>
double ks_test(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double en = std::sqrt(n);
    return ks_tail((en + 0.12 + 0.11 / en) * d);
}

inline double ks_test_exponential(const std::vector<double>& xs, double rate) {
    return ks_test(xs, [rate](double x) { return 1.0 - std::exp(-rate * x); });
}

/// Two-sided sign test p-value for median zero (normal approximation).
inline double sign_test_pvalue(std::size_t n_positive, std::size_t n) {
    if (n == 0) return 1.0;
    const double z = (static_cast<double>(n_positive) - 0.5 * static_cast<double>(n)) /
                     std::sqrt(0.25 * static_cast<double>(n));
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

// ---------------------------------------------------------------------------
// Duality cross-check (the two simulators are each other's oracle through
// E_w0[ int psi prod w_T ] = int psi E_x[ prod_j w_0(xi_T^j) ]).
// ---------------------------------------------------------------------------

struct DualityCheckConfig {
    EventModel model;
    TorusDomain domain;
    double cell_width = 0.1;
    InitialFieldSpec initial;
    std::vector<ObservableSpec> psi; // k factors, each a nonnegative density shape
    double horizon = 1.0;
    long replicates = 1000;
    std::uint64_t seed = 0;
};

struct DualityReport {
    McReport forward_side;
    McReport dual_side;
    double z = 0.0;
};

inline DualityReport duality_check(const DualityCheckConfig& cfg) {
    if (cfg.psi.empty()) throw config_error("duality_check: need at least one psi factor");
    for (const auto& f : cfg.psi) {
        f.validate(cfg.domain);
        if (!f.nonnegative())
            throw config_error("duality_check: psi factors must be nonnegative densities");
    }
    const EventModel model = cfg.model.truncated_for(cfg.domain);

    // Continuous normalizations of the psi factors (the dual side samples
    // from the normalized density and multiplies the mass back in).
    GridField w0(cfg.domain, cfg.cell_width);
    w0.fill(cfg.initial);
    std::vector<double> masses;
    double total_mass = 1.0;
    for (const auto& f : cfg.psi) {
        const double m = w0.integral_of(f);
        if (!(m > 0.0)) throw config_error("duality_check: psi factor has zero mass");
        masses.push_back(m);
        total_mass *= m;
    }

    std::vector<double> lhs;
    lhs.reserve(static_cast<std::size_t>(cfg.replicates));
    for (long rep = 0; rep < cfg.replicates; ++rep) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
        ForwardState state;
        state.w = w0;
        run_forward_with_sampler(state, model, cfg.horizon, {}, rng, [](const ForwardState&) {});
        double prod = 1.0;
        for (const auto& f : cfg.psi) prod *= state.w.inner_product(f);
        lhs.push_back(prod);
    }

    std::vector<double> rhs;
    rhs.reserve(static_cast<std::size_t>(cfg.replicates));
    for (long rep = 0; rep < cfg.replicates; ++rep) {
        Rng rng(derive_seed(cfg.seed ^ 0x64756c6373696d55ULL, static_cast<std::uint64_t>(rep)));
        std::vector<Point> starts;
        for (const auto& f : cfg.psi) starts.push_back(f.sample(cfg.domain, rng));
        DualSimulator sim(model, cfg.domain, starts, rng);
        run_dual(sim, cfg.horizon, {});
        double prod = total_mass;
        for (const auto& xi : sim.state().particles) prod *= w0.value_at(xi);
        rhs.push_back(prod);
    }

    DualityReport rep;
    auto [ml, sl] = mean_and_se(lhs);
    auto [mr, sr] = mean_and_se(rhs);
    rep.forward_side = {ml, sl, cfg.replicates, cfg.seed, "duality:forward"};
    rep.dual_side = {mr, sr, cfg.replicates, cfg.seed, "duality:dual"};
    rep.z = z_score(rep.forward_side, rep.dual_side);
    return rep;
}

// ---------------------------------------------------------------------------
// Lineage diagnostics.
// ---------------------------------------------------------------------------

struct MsdReport {
    std::vector<double> times;
    std::vector<double> variance;    // per-coordinate displacement variance
    std::vector<double> variance_se;
    double sign_test_p = 1.0; // symmetry of the terminal displacement
};

/// Per-coordinate displacement variance of the tracked single lineage in the
/// rescaled regime over independent paths; coordinates are pooled (they are
/// exchangeable under the isotropic jump law). Positions between jumps are
/// constant, so sampling reads the pre-jump position for sample times
/// strictly before each jump.
inline MsdReport lineage_msd(const EventModel& scaled_model, int dimension, double space_factor,
                             double time_factor, const std::vector<double>& rescaled_times,
                             long n_paths, std::uint64_t seed) {
    MsdReport out;
    out.times = rescaled_times;
    std::vector<std::vector<double>> disp(rescaled_times.size());
    std::size_t positives = 0;
    std::size_t nonzero = 0;
    for (long path = 0; path < n_paths; ++path) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(path)));
        SingleLineage lin(scaled_model, dimension, rng);
        Point before = lin.position();
        std::size_t next = 0;
        const double last_target = rescaled_times.back() * time_factor;
        while (next < rescaled_times.size()) {
            auto j = lin.next_jump();
            while (next < rescaled_times.size() && rescaled_times[next] * time_factor < j.time) {
                for (int c = 0; c < dimension; ++c)
                    disp[next].push_back(before[c] * space_factor);
                ++next;
            }
            before = lin.position();
            if (j.time > last_target) break;
        }
        const double terminal = disp.back().empty() ? 0.0 : disp.back().back();
        if (terminal != 0.0) {
            ++nonzero;
            if (terminal > 0.0) ++positives;
        }
    }
    for (const auto& samples : disp) {
        auto [var, se] = variance_and_se(samples);
        out.variance.push_back(var);
        out.variance_se.push_back(se);
    }
    out.sign_test_p = sign_test_pvalue(positives, nonzero);
    return out;
}

/// Rescaled time of the first branch of a tracked lineage, per path.
/// Exponential with rate n u_n s_n int V_r mu(dr) when the law is exact.
inline std::vector<double> first_branch_times(const EventModel& scaled_model, int dimension,
                                              double time_factor, long n_paths, std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_paths));
    for (long path = 0; path < n_paths; ++path) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(path)));
        SingleLineage lin(scaled_model, dimension, rng);
        while (true) {
            auto j = lin.next_jump();
            if (j.branch) {
                out.push_back(j.time / time_factor);
                break;
            }
        }
    }
    return out;
}

/// Rescaled jump magnitudes of a tracked lineage (for tail-index checks).
inline std::vector<double> lineage_jump_magnitudes(const EventModel& scaled_model, int dimension,
                                                   double space_factor, double unscaled_horizon,
                                                   long n_paths, std::uint64_t seed) {
    std::vector<double> out;
    for (long path = 0; path < n_paths; ++path) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(path)));
        SingleLineage lin(scaled_model, dimension, rng);
        while (true) {
            auto j = lin.next_jump();
            if (j.time > unscaled_horizon) break;
            double s = 0.0;
            for (int c = 0; c < dimension; ++c) s += j.displacement[c] * j.displacement[c];
            out.push_back(std::sqrt(s) * space_factor);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic variation.
// ---------------------------------------------------------------------------

struct QvEstimate {
    double realized = 0.0;
    double plug_in = 0.0;
    double ratio = 0.0;
};

/// Realized quadratic variation of a sampled series against the plug-in
/// integral qv_constant * int <wbar(1-wbar), f^2> ds (trapezoid).
inline QvEstimate qv_estimate(const std::vector<double>& times, const std::vector<double>& series,
                              const std::vector<double>& wbar_var_f2, double qv_constant) {
    if (times.size() != series.size() || times.size() != wbar_var_f2.size())
        throw input_error("qv_estimate: size mismatch");
    if (times.size() < 100) log::warn("qv_estimate: fewer than 100 increments; estimate is noisy");
    QvEstimate out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double d = series[i] - series[i - 1];
        out.realized += d * d;
    }
    out.plug_in = qv_constant * trapezoid(times, wbar_var_f2);
    out.ratio = out.plug_in != 0.0 ? out.realized / out.plug_in : 0.0;
    return out;
}

/// | average of w over B(x,r) - wbar^n(x) | for one state (the Lemma 5.2
/// diagnostic; the caller averages over replicates).
inline double averaging_gap(const ForwardState& state, const Point& x, double r, double base_radius) {
    return std::abs(local_average(state, x, r) - local_average(state, x, base_radius));
}

} // namespace slfv
