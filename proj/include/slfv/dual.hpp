#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "slfv/event_stream.hpp"
#include "slfv/geometry.hpp"
#include "slfv/scaling.hpp"

namespace slfv {

/// The system of potential ancestral lineages Xi_t: a finite set of points
/// of the torus plus branch/coalescence counters. Never empty.
struct DualState {
    std::vector<Point> particles;
    double time = 0.0;
    std::uint64_t branches = 0;
    std::uint64_t coalescences = 0;
    std::uint64_t jumps = 0; // marked events (any kind)
    std::vector<double> branch_times;

    std::size_t count() const { return particles.size(); }
};

struct DualTrajectory {
    std::vector<double> times;
    std::vector<std::size_t> particle_counts;
    std::vector<std::uint64_t> branches_at;     // cumulative, per sample time
    std::vector<std::uint64_t> coalescences_at; // cumulative, per sample time
    std::vector<std::vector<Point>> positions;  // filled when requested
    std::uint64_t branches = 0;
    std::uint64_t coalescences = 0;
};

/// Exact simulation of the dual via thinning: covering events are proposed
/// at rate N * Lambda1 from the size-biased radius law around a uniformly
/// chosen particle and accepted with probability 1/#covered, which
/// reproduces the Poisson events hitting at least one lineage. A uniform
/// hash grid answers coverage queries; events wider than a bucket fall back
/// to a linear scan (rare under the heavy tail).
class DualSimulator {
  public:
    DualSimulator(const EventModel& model, const TorusDomain& domain, std::vector<Point> initial,
                  Rng& rng)
        : model_(model.truncated_for(domain)), domain_(domain), rng_(&rng) {
        if (initial.empty()) throw config_error("DualSimulator: need at least one particle");
        // Lambda1 = (1+s) int V_r mu(dr)
        per_particle_rate_ = (1.0 + model_.selection) * model_.mean_ball_mass(domain_.dimension);
        const double diameter = model_.variant == EventModel::Variant::fixed_radius
                                    ? 2.0 * model_.radius
                                    : 2.0;
        bucket_count_ = std::max(1, static_cast<int>(std::floor(domain_.side_length / diameter)));
        bucket_side_ = domain_.side_length / bucket_count_;
        state_.particles.reserve(initial.size() * 4);
        for (const auto& p : initial) insert_particle(domain_.wrap(p));
    }

    const DualState& state() const { return state_; }
    DualState& state() { return state_; }
    const EventModel& model() const { return model_; }
    double per_particle_rate() const { return per_particle_rate_; }

    /// Next accepted covering event. Advances no state except the clock;
    /// returns the event and the covered particle ids.
    ReproductionEvent propose_covering_event(std::vector<std::size_t>& covered) {
        while (true) {
            const double rate = per_particle_rate_ * static_cast<double>(state_.particles.size());
            state_.time += rng_->exponential(rate);
            const std::size_t i =
                static_cast<std::size_t>(rng_->uniform() * static_cast<double>(state_.particles.size()));
            const std::size_t anchor = std::min(i, state_.particles.size() - 1);
            const double r = model_.sample_size_biased_radius(*rng_, domain_.dimension);
            const Point x =
                domain_.wrap(rng_->uniform_in_ball(state_.particles[anchor], r, domain_.dimension));
            covered.clear();
            collect_covered(x, r, covered);
            // anchor is always covered; acceptance 1/#covered
            if (covered.size() == 1 || rng_->uniform() * static_cast<double>(covered.size()) < 1.0) {
                ReproductionEvent e;
                e.time = state_.time;
                e.center = x;
                e.radius = r;
                e.impact = model_.impact;
                e.kind = (model_.selection > 0.0 &&
                          rng_->uniform() < model_.selection / (1.0 + model_.selection))
                             ? EventKind::selective
                             : EventKind::neutral;
                return e;
            }
        }
    }

    /// Definition of the dual dynamics: mark covered lineages independently
    /// with probability u; no marks = no-op; otherwise all marked lineages
    /// are replaced by one (neutral) or two (selective) fresh uniform draws
    /// from the event ball.
    void apply_dual_event(const ReproductionEvent& e, const std::vector<std::size_t>& covered) {
        marked_.clear();
        for (const std::size_t id : covered)
            if (rng_->bernoulli(e.impact)) marked_.push_back(id);
        if (marked_.empty()) return;
        ++state_.jumps;
        const std::size_t n_marked = marked_.size();
        // remove in descending id order; swap-remove renumbers only ids above
        std::sort(marked_.begin(), marked_.end(), std::greater<>());
        for (const std::size_t id : marked_) remove_particle(id);
        const int offspring = e.kind == EventKind::selective ? 2 : 1;
        for (int k = 0; k < offspring; ++k)
            insert_particle(domain_.wrap(rng_->uniform_in_ball(e.center, e.radius, domain_.dimension)));
        if (e.kind == EventKind::selective) {
            ++state_.branches;
            state_.branch_times.push_back(e.time);
        }
        if (n_marked >= 2) state_.coalescences += n_marked - 1;
    }

    /// One accepted event, applied. Returns false if its time exceeds the
    /// horizon (the clock then rests at the horizon; the discarded event is
    /// redrawn exactly on resume by memorylessness).
    bool step(double horizon) {
        std::vector<std::size_t> covered;
        ReproductionEvent e = propose_covering_event(covered);
        if (e.time > horizon) {
            state_.time = horizon;
            return false;
        }
        apply_dual_event(e, covered);
        return true;
    }

    std::size_t coverage_count(const Point& x, double r) {
        std::vector<std::size_t> ids;
        collect_covered(x, r, ids);
        return ids.size();
    }

  private:
    void collect_covered(const Point& x, double r, std::vector<std::size_t>& out) const {
        const double r2 = r * r;
        if (r <= bucket_side_ && bucket_count_ >= 3) {
            std::array<int, 3> base{0, 0, 0};
            for (int i = 0; i < domain_.dimension; ++i)
                base[i] = std::min(bucket_count_ - 1, static_cast<int>(std::floor(x[i] / bucket_side_)));
            std::array<int, 3> off{0, 0, 0};
            const int dmax = domain_.dimension;
            for (off[0] = -1; off[0] <= 1; ++off[0]) {
                for (off[1] = dmax > 1 ? -1 : 0; off[1] <= (dmax > 1 ? 1 : 0); ++off[1]) {
                    for (off[2] = dmax > 2 ? -1 : 0; off[2] <= (dmax > 2 ? 1 : 0); ++off[2]) {
                        std::uint64_t key = 0;
                        for (int i = 0; i < dmax; ++i) {
                            int c = (base[i] + off[i]) % bucket_count_;
                            if (c < 0) c += bucket_count_;
                            key = key * static_cast<std::uint64_t>(bucket_count_) +
                                  static_cast<std::uint64_t>(c);
                        }
                        const auto it = buckets_.find(key);
                        if (it == buckets_.end()) continue;
                        for (const std::size_t id : it->second)
                            if (domain_.distance_squared(state_.particles[id], x) <= r2)
                                out.push_back(id);
                    }
                }
            }
        } else {
            for (std::size_t id = 0; id < state_.particles.size(); ++id)
                if (domain_.distance_squared(state_.particles[id], x) <= r2) out.push_back(id);
        }
    }

    std::uint64_t bucket_key(const Point& p) const {
        std::uint64_t key = 0;
        for (int i = 0; i < domain_.dimension; ++i) {
            int c = std::min(bucket_count_ - 1, static_cast<int>(std::floor(p[i] / bucket_side_)));
            key = key * static_cast<std::uint64_t>(bucket_count_) + static_cast<std::uint64_t>(c);
        }
        return key;
    }

    void bucket_add(std::size_t id) { buckets_[bucket_key(state_.particles[id])].push_back(id); }

    void bucket_erase(std::size_t id) {
        auto& vec = buckets_[bucket_key(state_.particles[id])];
        for (auto& v : vec) {
            if (v == id) {
                v = vec.back();
                vec.pop_back();
                return;
            }
        }
    }

    void insert_particle(const Point& p) {
        state_.particles.push_back(p);
        bucket_add(state_.particles.size() - 1);
    }

    void remove_particle(std::size_t id) {
        bucket_erase(id);
        const std::size_t last = state_.particles.size() - 1;
        if (id != last) {
            bucket_erase(last);
            state_.particles[id] = state_.particles[last];
            state_.particles.pop_back();
            bucket_add(id);
        } else {
            state_.particles.pop_back();
        }
    }

    EventModel model_;
    TorusDomain domain_;
    Rng* rng_;
    DualState state_;
    double per_particle_rate_ = 0.0;
    int bucket_count_ = 1;
    double bucket_side_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
    std::vector<std::size_t> marked_;
};

struct DualRunOptions {
    bool record_positions = false;
};

/// Run the dual to the horizon, recording summaries at the sample times.
inline DualTrajectory run_dual(DualSimulator& sim, double horizon,
                               const std::vector<double>& sample_times,
                               const DualRunOptions& opts = {}) {
    DualTrajectory out;
    std::size_t next_sample = 0;
    const auto record_until = [&](double stop) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= stop) {
            out.times.push_back(sample_times[next_sample]);
            out.particle_counts.push_back(sim.state().count());
            out.branches_at.push_back(sim.state().branches);
            out.coalescences_at.push_back(sim.state().coalescences);
            if (opts.record_positions) out.positions.push_back(sim.state().particles);
            ++next_sample;
        }
    };
    while (true) {
        std::vector<std::size_t> covered;
        ReproductionEvent e = sim.propose_covering_event(covered);
        record_until(std::min(e.time, horizon));
        if (e.time > horizon) {
            sim.state().time = horizon;
            break;
        }
        sim.apply_dual_event(e, covered);
    }
    record_until(horizon);
    out.branches = sim.state().branches;
    out.coalescences = sim.state().coalescences;
    return out;
}

/// Simulation plan for the rescaled dual Xi^n: unscaled dynamics with
/// u_n, s_n to horizon n T, positions reported through the n^{-beta} factor.
struct DualRescalePlan {
    ScalingParams params;
    EventModel scaled_model;

    double unscaled_horizon(double rescaled_T) const { return rescaled_T * params.time_factor(); }
};

inline DualRescalePlan rescaled_dual_config(const EventModel& base, long n) {
    DualRescalePlan plan;
    plan.params = scaling_params(n, base);
    plan.scaled_model = base;
    plan.scaled_model.impact = plan.params.u_n;
    plan.scaled_model.selection = plan.params.s_n;
    return plan;
}

/// Marginal law of one tracked lineage (free space, no torus): covering
/// events arrive at rate Lambda1 = (1+s) int V_r mu(dr); a marked event
/// displaces the lineage by the sum of two independent uniform draws from
/// a ball with the size-biased radius. Selective marked events are branch
/// points of the full dual; the tracked lineage continues as one offspring.
class SingleLineage {
  public:
    SingleLineage(const EventModel& model, int dimension, Rng& rng)
        : model_(model), d_(dimension), rng_(&rng) {
        rate_ = (1.0 + model_.selection) * model_.mean_ball_mass(d_);
    }

    double covering_rate() const { return rate_; }

    struct Jump {
        double time;
        Point displacement;
        double radius;
        bool branch;
    };

    /// Advance to the next marked event (skipping unmarked covers).
    Jump next_jump() {
        while (true) {
            time_ += rng_->exponential(rate_);
            if (!rng_->bernoulli(model_.impact)) continue;
            const double r = model_.sample_size_biased_radius(*rng_, d_);
            const Point zero{0.0, 0.0, 0.0};
            const Point a = rng_->uniform_in_ball(zero, r, d_); // event center - lineage
            Point x = rng_->uniform_in_ball(zero, r, d_);       // offspring - event center
            for (int i = 0; i < d_; ++i) x[i] += a[i];
            const bool branch =
                model_.selection > 0.0 &&
                rng_->uniform() < model_.selection / (1.0 + model_.selection);
            for (int i = 0; i < d_; ++i) position_[i] += x[i];
            return Jump{time_, x, r, branch};
        }
    }

    double time() const { return time_; }
    const Point& position() const { return position_; }

  private:
    EventModel model_;
    int d_;
    Rng* rng_;
    double rate_ = 0.0;
    double time_ = 0.0;
    Point position_{0.0, 0.0, 0.0};
};

} // namespace slfv
