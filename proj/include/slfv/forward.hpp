#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "slfv/event_stream.hpp"
#include "slfv/geometry.hpp"
#include "slfv/observables.hpp"
#include "slfv/scaling.hpp"

namespace slfv {

/// Cell-constant field on the periodic grid: (L/h)^d cells, value = local
/// proportion of type 0, always in [0,1].
struct GridField {
    TorusDomain domain;
    int cells_per_side = 1;
    double h = 1.0;
    std::vector<double> data;

    GridField() = default;

    GridField(const TorusDomain& dom, double cell_width) : domain(dom) {
        const double ratio = dom.side_length / cell_width;
        cells_per_side = static_cast<int>(std::lround(ratio));
        if (cells_per_side < 1 || std::abs(ratio - cells_per_side) > 1e-9 * ratio)
            throw config_error("GridField: L/h must be an integer");
        h = dom.side_length / cells_per_side;
        std::size_t n = 1;
        for (int i = 0; i < dom.dimension; ++i) n *= static_cast<std::size_t>(cells_per_side);
        data.assign(n, 0.0);
    }

    int dim() const { return domain.dimension; }
    std::size_t size() const { return data.size(); }
    double cell_volume() const { return std::pow(h, dim()); }

    int wrap_index(long i) const {
        long m = cells_per_side;
        long r = i % m;
        if (r < 0) r += m;
        return static_cast<int>(r);
    }

    std::size_t linear(const std::array<int, 3>& idx) const {
        std::size_t lin = 0;
        for (int i = 0; i < dim(); ++i) lin = lin * cells_per_side + static_cast<std::size_t>(idx[i]);
        return lin;
    }

    std::array<int, 3> cell_of(const Point& x) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int i = 0; i < dim(); ++i)
            idx[i] = wrap_index(static_cast<long>(std::floor(x[i] / h)));
        return idx;
    }

    Point center(const std::array<int, 3>& idx) const {
        Point p{0.0, 0.0, 0.0};
        for (int i = 0; i < dim(); ++i) p[i] = (idx[i] + 0.5) * h;
        return p;
    }

    double value_at(const Point& x) const { return data[linear(cell_of(x))]; }

    void fill(const InitialFieldSpec& init) {
        for_each_cell([&](std::size_t lin, const Point& c) { data[lin] = init(c, domain); });
    }

    void fill(const std::function<double(const Point&)>& f) {
        for_each_cell([&](std::size_t lin, const Point& c) { data[lin] = f(c); });
    }

    template <typename F>
    void for_each_cell(F&& f) const {
        std::array<int, 3> idx{0, 0, 0};
        const int m = cells_per_side;
        if (dim() == 1) {
            for (idx[0] = 0; idx[0] < m; ++idx[0]) f(linear(idx), center(idx));
        } else if (dim() == 2) {
            for (idx[0] = 0; idx[0] < m; ++idx[0])
                for (idx[1] = 0; idx[1] < m; ++idx[1]) f(linear(idx), center(idx));
        } else {
            for (idx[0] = 0; idx[0] < m; ++idx[0])
                for (idx[1] = 0; idx[1] < m; ++idx[1])
                    for (idx[2] = 0; idx[2] < m; ++idx[2]) f(linear(idx), center(idx));
        }
    }

    /// Visit every cell whose center lies in the (wrapped) ball B(x,r).
    template <typename F>
    void for_each_cell_in_ball(const Point& x, double r, F&& f) const {
        std::array<long, 3> lo{0, 0, 0};
        std::array<long, 3> hi{0, 0, 0};
        for (int i = 0; i < dim(); ++i) {
            lo[i] = static_cast<long>(std::floor((x[i] - r) / h));
            hi[i] = static_cast<long>(std::floor((x[i] + r) / h)) + 1;
        }
        const double r2 = r * r;
        std::array<int, 3> idx{0, 0, 0};
        Point c{0.0, 0.0, 0.0};
        const auto visit = [&](const std::array<long, 3>& raw) {
            for (int i = 0; i < dim(); ++i) {
                idx[i] = wrap_index(raw[i]);
                c[i] = (raw[i] + 0.5) * h; // unwrapped center; compare against x directly
            }
            double s = 0.0;
            for (int i = 0; i < dim(); ++i) {
                const double dv = c[i] - x[i];
                s += dv * dv;
            }
            if (s <= r2) f(linear(idx), c);
        };
        std::array<long, 3> raw{0, 0, 0};
        if (dim() == 1) {
            for (raw[0] = lo[0]; raw[0] < hi[0]; ++raw[0]) visit(raw);
        } else if (dim() == 2) {
            for (raw[0] = lo[0]; raw[0] < hi[0]; ++raw[0])
                for (raw[1] = lo[1]; raw[1] < hi[1]; ++raw[1]) visit(raw);
        } else {
            for (raw[0] = lo[0]; raw[0] < hi[0]; ++raw[0])
                for (raw[1] = lo[1]; raw[1] < hi[1]; ++raw[1])
                    for (raw[2] = lo[2]; raw[2] < hi[2]; ++raw[2]) visit(raw);
        }
    }

    /// Midpoint quadrature of <w,f> over the torus.
    double inner_product(const ObservableSpec& f) const {
        double s = 0.0;
        for_each_cell([&](std::size_t lin, const Point& c) { s += data[lin] * f(c, domain); });
        return s * cell_volume();
    }

    /// Midpoint quadrature of the integral of f alone.
    double integral_of(const ObservableSpec& f) const {
        double s = 0.0;
        for_each_cell([&](std::size_t, const Point& c) { s += f(c, domain); });
        return s * cell_volume();
    }
};

/// Forward-in-time SLFVS state.
struct ForwardState {
    GridField w;
    double time = 0.0;

    ForwardState() = default;
    ForwardState(const TorusDomain& domain, double cell_width, const InitialFieldSpec& init)
        : w(domain, cell_width) {
        w.fill(init);
    }
};

/// Volume-weighted average of w over B(x,r) (cells entering by the
/// center-in-ball rule; at least one cell required).
inline double local_average(const ForwardState& state, const Point& x, double r) {
    if (r < state.w.h) throw resolution_error("local_average: radius below cell width");
    double sum = 0.0;
    std::size_t count = 0;
    state.w.for_each_cell_in_ball(x, r, [&](std::size_t lin, const Point&) {
        sum += state.w.data[lin];
        ++count;
    });
    if (count == 0) throw resolution_error("local_average: no cell center inside ball");
    return sum / static_cast<double>(count);
}

namespace detail {

inline void check_event_radius(const ForwardState& state, const ReproductionEvent& e) {
    if (e.radius > state.w.domain.max_event_radius())
        throw domain_violation("forward event radius exceeds L/4");
}

inline bool draw_parent_type0(const ForwardState& state, const ReproductionEvent& e, Rng& rng) {
    const Point z = state.w.domain.wrap(rng.uniform_in_ball(e.center, e.radius, state.w.dim()));
    return rng.bernoulli(state.w.value_at(z));
}

inline void affine_update(ForwardState& state, const ReproductionEvent& e, bool offspring_type0) {
    const double u = e.impact;
    const double add = offspring_type0 ? u : 0.0;
    state.w.for_each_cell_in_ball(e.center, e.radius, [&](std::size_t lin, const Point&) {
        state.w.data[lin] = (1.0 - u) * state.w.data[lin] + add;
    });
}

} // namespace detail

/// Neutral event: one parent uniform in the ball, type from the local
/// frequency, then w <- (1-u) w + u 1{type 0} on covered cells.
inline void apply_neutral_event(ForwardState& state, const ReproductionEvent& e, Rng& rng) {
    detail::check_event_radius(state, e);
    const bool type0 = detail::draw_parent_type0(state, e, rng);
    detail::affine_update(state, e, type0);
}

/// Selective event: two independent potential parents; offspring is type 0
/// only when both are.
inline void apply_selective_event(ForwardState& state, const ReproductionEvent& e, Rng& rng) {
    detail::check_event_radius(state, e);
    const bool a = detail::draw_parent_type0(state, e, rng);
    const bool b = detail::draw_parent_type0(state, e, rng);
    detail::affine_update(state, e, a && b);
}

inline void apply_event(ForwardState& state, const ReproductionEvent& e, Rng& rng) {
    if (e.kind == EventKind::neutral) apply_neutral_event(state, e, rng);
    else apply_selective_event(state, e, rng);
    state.time = e.time;
}

/// Per-sample-time record of one observable. Rescaled runs additionally
/// record the locally averaged pairings through RescaledObservable.
struct ObservableSeries {
    std::vector<double> wf;
};

struct ForwardRunOptions {
    bool record_snapshots = false;
};

struct ForwardRunResult {
    std::vector<double> sample_times;
    std::vector<ObservableSeries> series; // one per observable
    std::vector<GridField> snapshots;     // at sample times when requested
    std::uint64_t events_applied = 0;
};

/// Core loop: chronological event application, calling the sampler at each
/// of the sorted sample times (field is constant between events).
template <typename Sampler>
std::uint64_t run_forward_with_sampler(ForwardState& state, const EventModel& model, double horizon,
                                       const std::vector<double>& sample_times, Rng& rng,
                                       Sampler&& sampler) {
    EventStream stream(model, state.w.domain, rng);
    std::uint64_t events = 0;
    std::size_t next_sample = 0;
    ReproductionEvent e = stream.next();
    while (true) {
        const double stop = std::min(e.time, horizon);
        while (next_sample < sample_times.size() && sample_times[next_sample] <= stop) {
            state.time = sample_times[next_sample];
            sampler(state);
            ++next_sample;
        }
        if (e.time > horizon) break;
        apply_event(state, e, rng);
        ++events;
        e = stream.next();
    }
    state.time = horizon;
    return events;
}

/// Chronological event application with observable recording at the given
/// sample times (must be sorted, within [0, horizon]).
inline ForwardRunResult run_forward(ForwardState& state, const EventModel& model, double horizon,
                                    const std::vector<ObservableSpec>& observers,
                                    const std::vector<double>& sample_times, Rng& rng,
                                    const ForwardRunOptions& opts = {}) {
    ForwardRunResult out;
    out.series.resize(observers.size());
    out.events_applied = run_forward_with_sampler(
        state, model, horizon, sample_times, rng, [&](const ForwardState& s) {
            out.sample_times.push_back(s.time);
            for (std::size_t i = 0; i < observers.size(); ++i)
                out.series[i].wf.push_back(s.w.inner_product(observers[i]));
            if (opts.record_snapshots) out.snapshots.push_back(s.w);
        });
    return out;
}

/// Simulation plan equivalent in law to the rescaled process w^n: run the
/// unscaled dynamics with impacts u_n and selection s_n on the blown-up
/// torus of side n^beta L for horizon n T, then read coordinates and times
/// through the space/time factors.
struct ForwardRescalePlan {
    ScalingParams params;
    EventModel scaled_model;      // u_n, s_n, unscaled radii
    TorusDomain unscaled_domain;  // side n^beta * L
    double unscaled_h = 0.0;
    double unscaled_horizon = 0.0;
    double averaging_radius = 0.0; // R (fixed) or 1 (stable), unscaled units

    /// Rescaled test point -> unscaled coordinates.
    Point to_unscaled(const Point& x) const {
        Point y = x;
        for (auto& v : y) v /= params.space_factor();
        return y;
    }
};

/// Build the rescaled-run plan. rescaled_h defaults to a quarter of the
/// rescaled event radius.
inline ForwardRescalePlan rescaled_config(const EventModel& base, long n,
                                          const TorusDomain& rescaled_domain, double rescaled_horizon,
                                          double rescaled_h = 0.0) {
    ForwardRescalePlan plan;
    plan.params = scaling_params(n, base);
    const double space = plan.params.space_factor(); // n^{-beta}
    plan.scaled_model = base;
    plan.scaled_model.impact = plan.params.u_n;
    plan.scaled_model.selection = plan.params.s_n;
    plan.unscaled_domain = TorusDomain(rescaled_domain.dimension, rescaled_domain.side_length / space);
    plan.averaging_radius =
        base.variant == EventModel::Variant::fixed_radius ? base.radius : 1.0;
    if (rescaled_h <= 0.0) rescaled_h = space * plan.averaging_radius / 4.0;
    double h_unscaled = rescaled_h / space;
    const int m = std::max(1, static_cast<int>(std::lround(plan.unscaled_domain.side_length / h_unscaled)));
    plan.unscaled_h = plan.unscaled_domain.side_length / m;
    plan.unscaled_horizon = rescaled_horizon * plan.params.time_factor();
    return plan;
}

/// Initialize the unscaled field from a rescaled initial profile.
inline ForwardState make_rescaled_state(const ForwardRescalePlan& plan, const InitialFieldSpec& init,
                                        const TorusDomain& rescaled_domain) {
    ForwardState state;
    state.w = GridField(plan.unscaled_domain, plan.unscaled_h);
    const double space = plan.params.space_factor();
    state.w.fill([&](const Point& y) {
        Point x{0.0, 0.0, 0.0};
        for (int i = 0; i < rescaled_domain.dimension; ++i) x[i] = y[i] * space;
        return init(x, rescaled_domain);
    });
    return state;
}

/// Observable defined in rescaled coordinates, evaluated against the
/// unscaled run through the plan's space factor. Returns the spec usable on
/// the unscaled grid together with the rescaled-volume weight.
struct RescaledObservable {
    ObservableSpec rescaled_spec;
    const ForwardRescalePlan* plan = nullptr;

    /// <wbar^n, f> and companions, integrating over rescaled coordinates.
    void measure(const ForwardState& state, double& wf, double& wbar_f, double& wbar_var_f2) const {
        const double space = plan->params.space_factor();
        const double vol = std::pow(state.w.h * space, state.w.dim());
        const TorusDomain rescaled(state.w.dim(), state.w.domain.side_length * space);
        double a = 0.0;
        double b = 0.0;
        double q = 0.0;
        state.w.for_each_cell([&](std::size_t lin, const Point& c) {
            Point x{0.0, 0.0, 0.0};
            for (int i = 0; i < state.w.dim(); ++i) x[i] = c[i] * space;
            const double fv = rescaled_spec(x, rescaled);
            if (fv == 0.0) return;
            a += fv * state.w.data[lin];
            const double wb = local_average(state, c, plan->averaging_radius);
            b += fv * wb;
            q += fv * fv * wb * (1.0 - wb);
        });
        wf = a * vol;
        wbar_f = b * vol;
        wbar_var_f2 = q * vol;
    }
};

} // namespace slfv
