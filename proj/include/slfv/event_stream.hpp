#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "slfv/geometry.hpp"
#include "slfv/rng.hpp"

namespace slfv {

enum class EventKind { neutral, selective };

/// One reproduction event of the Poisson stream.
struct ReproductionEvent {
    double time = 0.0;
    Point center{0.0, 0.0, 0.0};
    double radius = 0.0;
    double impact = 0.0;
    EventKind kind = EventKind::neutral;
};

/// Radius law of the event measures. Fixed: mu = delta_R. Stable: heavy
/// Pareto tail mu(dr) = r^{-(d+alpha+1)} dr on [1, max_radius). Selective
/// events reuse the same radius law with total mass scaled by s, and all
/// impacts are the single value u (nu = delta_u).
struct EventModel {
    enum class Variant { fixed_radius, stable_radii };

    Variant variant = Variant::fixed_radius;
    double radius = 1.0;          // fixed_radius only
    double alpha = 1.5;           // stable_radii only, in (1,2)
    std::optional<double> max_radius; // stable_radii truncation (finite domains)
    double impact = 0.1;          // u in (0,1]
    double selection = 0.0;       // s >= 0, mu' = s mu

    static EventModel fixed(double R, double u, double s) {
        EventModel m;
        m.variant = Variant::fixed_radius;
        m.radius = R;
        m.impact = u;
        m.selection = s;
        m.validate();
        return m;
    }

    static EventModel stable(double alpha, double u, double s,
                             std::optional<double> r_max = std::nullopt) {
        EventModel m;
        m.variant = Variant::stable_radii;
        m.alpha = alpha;
        m.impact = u;
        m.selection = s;
        m.max_radius = r_max;
        m.validate();
        return m;
    }

    void validate() const {
        if (!(impact > 0.0) || impact > 1.0)
            throw config_error("EventModel: impact u must be in (0,1]");
        if (selection < 0.0) throw config_error("EventModel: selection s must be >= 0");
        if (variant == Variant::fixed_radius) {
            if (!(radius > 0.0)) throw config_error("EventModel: radius must be positive");
        } else {
            if (!(alpha > 1.0) || !(alpha < 2.0))
                throw config_error("EventModel: alpha must be in (1,2)");
            if (max_radius && !(*max_radius > 1.0))
                throw config_error("EventModel: max_radius must exceed the minimum radius 1");
        }
        // Condition (1.1): int r^d u mu(dr) < infinity. Holds for both
        // variants by construction (delta mass / integrable Pareto tail),
        // so validation reduces to the parameter ranges above.
    }

    /// Bind the stable variant to a torus: radii above L/4 cannot be placed
    /// on the wrap, so the measure is truncated there (identically for the
    /// forward and dual simulators, which preserves the duality).
    EventModel truncated_for(const TorusDomain& domain) const {
        EventModel m = *this;
        if (variant == Variant::fixed_radius) {
            if (radius > domain.max_event_radius())
                throw config_error("EventModel: radius exceeds L/4 for this domain");
            return m;
        }
        const double cap = domain.max_event_radius();
        if (cap <= 1.0)
            throw config_error("EventModel: domain too small for stable radii (need L > 4)");
        if (!m.max_radius || *m.max_radius > cap) m.max_radius = cap;
        return m;
    }

    double largest_radius() const {
        if (variant == Variant::fixed_radius) return radius;
        return max_radius ? *max_radius : std::numeric_limits<double>::infinity();
    }

    /// Total mass of mu. Stable: int_1^rmax r^{-(d+alpha+1)} dr.
    double mu_mass(int d) const {
        if (variant == Variant::fixed_radius) return 1.0;
        const double p = static_cast<double>(d) + alpha;
        const double upper = max_radius ? std::pow(*max_radius, -p) : 0.0;
        return (1.0 - upper) / p;
    }

    /// int V_r mu(dr): mean covered volume per unit event intensity.
    /// Stable: V_1 (1 - rmax^{-alpha}) / alpha.
    double mean_ball_mass(int d) const {
        if (variant == Variant::fixed_radius) return ball_volume(d, radius);
        const double upper = max_radius ? std::pow(*max_radius, -alpha) : 0.0;
        return ball_volume(d, 1.0) * (1.0 - upper) / alpha;
    }

    /// Radius draw from mu normalized to a probability law.
    double sample_radius(Rng& rng, int d) const {
        if (variant == Variant::fixed_radius) return radius;
        const double p = static_cast<double>(d) + alpha;
        const double tail = max_radius ? std::pow(*max_radius, -p) : 0.0;
        const double v = 1.0 - rng.uniform_open() * (1.0 - tail);
        return std::pow(v, -1.0 / p);
    }

    /// Radius draw from the size-biased law V_r mu(dr) / int V_r mu(dr).
    /// Stable: density proportional to r^{-(alpha+1)} on [1, rmax).
    double sample_size_biased_radius(Rng& rng, int /*d*/) const {
        if (variant == Variant::fixed_radius) return radius;
        const double tail = max_radius ? std::pow(*max_radius, -alpha) : 0.0;
        const double v = 1.0 - rng.uniform_open() * (1.0 - tail);
        return std::pow(v, -1.0 / alpha);
    }
};

/// Inverse-CDF sample of the untruncated stable radius law: U^{-1/(d+alpha)},
/// Pareto with tail index d+alpha.
inline double sample_stable_radius(double alpha, int d, double U) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw input_error("sample_stable_radius: alpha must be in (1,2)");
    if (!(U > 0.0) || !(U < 1.0)) throw input_error("sample_stable_radius: U must be in (0,1)");
    return std::pow(U, -1.0 / (static_cast<double>(d) + alpha));
}

/// Total Poisson intensity of events touching the torus:
/// L^d (1+s) mu_mass. Fixed radius: L^d (1+s); untruncated stable:
/// L^d (1+s) / (d+alpha).
inline double total_event_rate(const EventModel& model, const TorusDomain& domain) {
    return domain.volume() * (1.0 + model.selection) * model.mu_mass(domain.dimension);
}

/// Draw the event marks given the event time: center uniform on the torus,
/// radius from mu, impact u, kind selective with probability s/(1+s).
inline ReproductionEvent sample_event(const EventModel& model, const TorusDomain& domain, double t,
                                      Rng& rng) {
    ReproductionEvent e;
    e.time = t;
    e.center = rng.uniform_in_box(domain);
    e.radius = model.sample_radius(rng, domain.dimension);
    e.impact = model.impact;
    const double s = model.selection;
    e.kind = (s > 0.0 && rng.uniform() < s / (1.0 + s)) ? EventKind::selective : EventKind::neutral;
    return e;
}

/// Lazy time-ordered event source. Neutral and selective streams share one
/// exponential clock with a kind coin; equivalent in law to two independent
/// Poisson processes by superposition.
class EventStream {
  public:
    EventStream(EventModel model, TorusDomain domain, Rng& rng)
        : model_(model.truncated_for(domain)), domain_(domain), rng_(&rng),
          rate_(total_event_rate(model_, domain_)) {}

    const EventModel& model() const { return model_; }
    double rate() const { return rate_; }

    ReproductionEvent next() {
        time_ += rng_->exponential(rate_);
        return sample_event(model_, domain_, time_, *rng_);
    }

  private:
    EventModel model_;
    TorusDomain domain_;
    Rng* rng_;
    double rate_;
    double time_ = 0.0;
};

} // namespace slfv
