#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "slfv/analysis.hpp"
#include "slfv/event_stream.hpp"
#include "slfv/limit_solvers.hpp"
#include "slfv/observables.hpp"

namespace slfv {

using json = nlohmann::json;

enum class ExperimentKind {
    forward,
    dual,
    duality_check,
    scaling_table,
    kernel,
    pde,
    spde,
    limit_dual,
    diagnostics,
};

inline ExperimentKind experiment_kind_from(const std::string& s) {
    if (s == "forward") return ExperimentKind::forward;
    if (s == "dual") return ExperimentKind::dual;
    if (s == "duality-check") return ExperimentKind::duality_check;
    if (s == "scaling-table") return ExperimentKind::scaling_table;
    if (s == "kernel") return ExperimentKind::kernel;
    if (s == "pde") return ExperimentKind::pde;
    if (s == "spde") return ExperimentKind::spde;
    if (s == "limit-dual") return ExperimentKind::limit_dual;
    if (s == "diagnostics") return ExperimentKind::diagnostics;
    throw config_error("kind: unknown experiment kind '" + s + "'");
}

namespace cfgdetail {

/// Strict-mode accessor: unknown keys are errors, every message carries the
/// field path.
class Obj {
  public:
    Obj(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j.is_object()) throw config_error(path_ + ": expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j_->items())
            if (!allowed.count(k)) throw config_error(path_ + ": unknown key '" + k + "'");
    }

    bool has(const char* key) const { return j_->contains(key); }

    const json& raw(const char* key) const { return j_->at(key); }

    template <typename T>
    T get(const char* key) const {
        if (!j_->contains(key)) throw config_error(path_ + "." + key + ": missing required field");
        try {
            return j_->at(key).get<T>();
        } catch (const json::exception&) {
            throw config_error(path_ + "." + key + ": wrong type");
        }
    }

    template <typename T>
    T get_or(const char* key, T fallback) const {
        if (!j_->contains(key)) return fallback;
        return get<T>(key);
    }

    const std::string& path() const { return path_; }

  private:
    const json* j_;
    std::string path_;
};

inline Point parse_point(const json& j, const std::string& path, int dimension) {
    if (!j.is_array() || static_cast<int>(j.size()) != dimension)
        throw config_error(path + ": expected an array of " + std::to_string(dimension) + " numbers");
    Point p{0.0, 0.0, 0.0};
    for (int i = 0; i < dimension; ++i) p[i] = j[static_cast<std::size_t>(i)].get<double>();
    return p;
}

} // namespace cfgdetail

struct DiagnosticsConfig {
    std::string which; // msd | qv | averaging-gap | branch-times | jump-tail
    long n_paths = 1000;
    std::vector<double> radii;   // averaging-gap
    std::size_t hill_k = 1000;   // jump-tail
};

struct LimitDualRunConfig {
    LimitDualConfig cfg;
    std::vector<Point> initial;
};

/// Fully validated experiment description.
struct RunConfig {
    ExperimentKind kind = ExperimentKind::forward;
    std::uint64_t seed = 0;
    long replicates = 1;
    std::string output = "out";
    int jobs = 1;

    std::optional<TorusDomain> domain;
    std::optional<EventModel> model;
    double cell_width = 0.0; // 0 = default rule
    std::optional<long> rescale_n;
    double horizon = 1.0;
    std::vector<double> sample_times;
    InitialFieldSpec initial;
    std::vector<ObservableSpec> observables;
    bool snapshots = false;
    bool record_positions = false;

    int duality_k = 1;

    std::optional<PdeConfig> pde;
    double pde_alpha = 1.5; // fractional variants
    double pde_u = 1.0;
    bool pde_fractional = false;

    std::optional<LimitDualRunConfig> limit_dual;
    std::optional<DiagnosticsConfig> diagnostics;
    std::vector<Point> initial_positions; // dual starting lineages

    json canonical; // parsed document (defaults filled where material)
};

inline std::uint64_t config_hash(const json& canonical) {
    const std::string dump = canonical.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline RunConfig parse_config_json(const json& root) {
    RunConfig cfg;
    cfgdetail::Obj top(root, "config");
    top.allow({"kind", "seed", "replicates", "output", "domain", "model", "grid", "rescale",
               "horizon", "sample_times", "initial", "observables", "duality", "pde", "limit_dual",
               "diagnostics", "snapshots", "record_positions", "initial_positions"});

    cfg.kind = experiment_kind_from(top.get<std::string>("kind"));
    if (top.has("seed")) {
        if (!top.raw("seed").is_number_unsigned())
            throw config_error("config.seed: must be a nonnegative integer");
        cfg.seed = top.get<std::uint64_t>("seed");
    }
    cfg.replicates = top.get_or<long>("replicates", 1);
    if (cfg.replicates < 0) throw config_error("config.replicates: must be >= 0");
    cfg.output = top.get_or<std::string>("output", "out");
    cfg.snapshots = top.get_or<bool>("snapshots", false);
    cfg.record_positions = top.get_or<bool>("record_positions", false);
    cfg.horizon = top.get_or<double>("horizon", 1.0);
    if (cfg.horizon < 0.0) throw config_error("config.horizon: must be >= 0");

    if (top.has("domain")) {
        cfgdetail::Obj dom(top.raw("domain"), "config.domain");
        dom.allow({"dimension", "side_length"});
        const int d = dom.get<int>("dimension");
        const double L = dom.get<double>("side_length");
        if (d < 1 || d > kMaxDim) throw config_error("config.domain.dimension: must be 1, 2 or 3");
        if (!(L > 0.0)) throw config_error("config.domain.side_length: must be positive");
        cfg.domain = TorusDomain(d, L);
    }

    if (top.has("model")) {
        cfgdetail::Obj m(top.raw("model"), "config.model");
        m.allow({"variant", "radius", "alpha", "max_radius", "impact", "selection"});
        const std::string variant = m.get<std::string>("variant");
        const double u = m.get<double>("impact");
        const double s = m.get_or<double>("selection", 0.0);
        try {
            if (variant == "fixed_radius") {
                cfg.model = EventModel::fixed(m.get<double>("radius"), u, s);
            } else if (variant == "stable_radii") {
                const double alpha = m.get<double>("alpha");
                if (!(alpha > 1.0) || !(alpha < 2.0))
                    throw config_error("config.model.alpha: alpha must be in (1,2)");
                std::optional<double> rmax;
                if (m.has("max_radius")) rmax = m.get<double>("max_radius");
                cfg.model = EventModel::stable(alpha, u, s, rmax);
            } else {
                throw config_error("config.model.variant: must be fixed_radius or stable_radii");
            }
        } catch (const config_error&) {
            throw;
        }
        // Geometry invariant: an event ball must never self-overlap across
        // the wrap.
        if (cfg.domain && cfg.model->variant == EventModel::Variant::fixed_radius &&
            cfg.model->radius > cfg.domain->max_event_radius())
            throw config_error("config: L > 4R violated");
        if (cfg.domain && cfg.model->variant == EventModel::Variant::stable_radii &&
            cfg.domain->side_length <= 4.0)
            throw config_error("config: stable radii need side_length > 4 (minimum radius 1)");
    }

    if (top.has("rescale")) {
        cfgdetail::Obj r(top.raw("rescale"), "config.rescale");
        r.allow({"n"});
        const long n = r.get<long>("n");
        if (n < 1) throw config_error("config.rescale.n: must be >= 1");
        cfg.rescale_n = n;
    }

    if (top.has("grid")) {
        cfgdetail::Obj g(top.raw("grid"), "config.grid");
        g.allow({"cell_width"});
        cfg.cell_width = g.get<double>("cell_width");
        if (!(cfg.cell_width > 0.0)) throw config_error("config.grid.cell_width: must be positive");
    }

    // default: 10 uniform sample times over (0, horizon]
    if (top.has("sample_times")) {
        cfgdetail::Obj st(top.raw("sample_times"), "config.sample_times");
        st.allow({"count", "times"});
        if (st.has("times")) {
            cfg.sample_times = st.get<std::vector<double>>("times");
            for (double t : cfg.sample_times)
                if (t < 0.0 || t > cfg.horizon)
                    throw config_error("config.sample_times.times: outside [0, horizon]");
            if (!std::is_sorted(cfg.sample_times.begin(), cfg.sample_times.end()))
                throw config_error("config.sample_times.times: must be sorted");
        } else {
            const long count = st.get<long>("count");
            if (count < 1) throw config_error("config.sample_times.count: must be >= 1");
            for (long i = 1; i <= count; ++i)
                cfg.sample_times.push_back(cfg.horizon * static_cast<double>(i) /
                                           static_cast<double>(count));
        }
    } else {
        for (int i = 1; i <= 10; ++i) cfg.sample_times.push_back(cfg.horizon * i / 10.0);
    }

    if (top.has("initial")) {
        cfgdetail::Obj init(top.raw("initial"), "config.initial");
        init.allow({"kind", "level", "amplitude", "center", "width", "mode"});
        const std::string kind = init.get<std::string>("kind");
        if (kind == "constant") cfg.initial.kind = InitialFieldSpec::Kind::constant;
        else if (kind == "half_torus") cfg.initial.kind = InitialFieldSpec::Kind::half_torus;
        else if (kind == "gaussian_bump") cfg.initial.kind = InitialFieldSpec::Kind::gaussian_bump;
        else if (kind == "cosine") cfg.initial.kind = InitialFieldSpec::Kind::cosine;
        else throw config_error("config.initial.kind: unknown initial field kind");
        cfg.initial.level = init.get_or<double>("level", 0.5);
        cfg.initial.amplitude = init.get_or<double>("amplitude", 0.4);
        cfg.initial.width = init.get_or<double>("width", 1.0);
        cfg.initial.mode = static_cast<int>(init.get_or<long>("mode", 1));
        if (init.has("center") && cfg.domain)
            cfg.initial.center = cfgdetail::parse_point(init.raw("center"), "config.initial.center",
                                                        cfg.domain->dimension);
        if (cfg.initial.level < 0.0 || cfg.initial.level > 1.0)
            throw config_error("config.initial.level: must be in [0,1]");
    }

    if (top.has("observables")) {
        const json& arr = top.raw("observables");
        if (!arr.is_array()) throw config_error("config.observables: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "config.observables[" + std::to_string(i) + "]";
            cfgdetail::Obj o(arr[i], path);
            o.allow({"family", "center", "amplitude", "radius", "width", "mode"});
            ObservableSpec spec;
            const std::string fam = o.get<std::string>("family");
            if (fam == "gaussian_bump") spec.family = ObservableSpec::Family::gaussian_bump;
            else if (fam == "ball_indicator") spec.family = ObservableSpec::Family::ball_indicator;
            else if (fam == "cosine_mode") spec.family = ObservableSpec::Family::cosine_mode;
            else throw config_error(path + ".family: unresolvable test function '" + fam + "'");
            if (!cfg.domain) throw config_error(path + ": observables need config.domain");
            if (o.has("center"))
                spec.center = cfgdetail::parse_point(o.raw("center"), path + ".center",
                                                     cfg.domain->dimension);
            spec.amplitude = o.get_or<double>("amplitude", 1.0);
            spec.radius = o.get_or<double>("radius", 1.0);
            spec.width = o.get_or<double>("width", 0.5);
            if (o.has("mode")) {
                const json& mode = o.raw("mode");
                if (!mode.is_array() || static_cast<int>(mode.size()) != cfg.domain->dimension)
                    throw config_error(path + ".mode: expected an integer per dimension");
                for (int k = 0; k < cfg.domain->dimension; ++k)
                    spec.mode[static_cast<std::size_t>(k)] = mode[static_cast<std::size_t>(k)].get<int>();
            }
            spec.validate(*cfg.domain);
            cfg.observables.push_back(spec);
        }
    }

    if (top.has("duality")) {
        cfgdetail::Obj d(top.raw("duality"), "config.duality");
        d.allow({"k"});
        cfg.duality_k = static_cast<int>(d.get<long>("k"));
        if (cfg.duality_k < 1) throw config_error("config.duality.k: must be >= 1");
    }

    if (top.has("pde")) {
        cfgdetail::Obj p(top.raw("pde"), "config.pde");
        p.allow({"diffusion", "reaction", "noise", "dx", "dt", "fractional", "alpha", "u"});
        if (!cfg.domain) throw config_error("config.pde: needs config.domain");
        PdeConfig pc;
        pc.domain = *cfg.domain;
        pc.diffusion = p.get_or<double>("diffusion", 0.0);
        pc.reaction = p.get_or<double>("reaction", 0.0);
        pc.noise = p.get_or<double>("noise", 0.0);
        pc.dx = p.get<double>("dx");
        pc.dt = p.get<double>("dt");
        pc.horizon = cfg.horizon;
        cfg.pde_fractional = p.get_or<bool>("fractional", false);
        if (cfg.pde_fractional) {
            cfg.pde_alpha = p.get<double>("alpha");
            if (!(cfg.pde_alpha > 1.0) || !(cfg.pde_alpha < 2.0))
                throw config_error("config.pde.alpha: alpha must be in (1,2)");
            cfg.pde_u = p.get_or<double>("u", 1.0);
        } else {
            pc.validate();
        }
        cfg.pde = pc;
    }

    if (top.has("limit_dual")) {
        cfgdetail::Obj ld(top.raw("limit_dual"), "config.limit_dual");
        ld.allow({"stable", "diffusion_variance", "alpha", "stable_scale", "branch_rate",
                  "coal_rate", "band_eps", "dt", "initial_positions", "dimension"});
        LimitDualRunConfig run;
        run.cfg.dimension = static_cast<int>(ld.get_or<long>("dimension", 1));
        run.cfg.stable = ld.get_or<bool>("stable", false);
        run.cfg.diffusion_variance = ld.get_or<double>("diffusion_variance", 1.0);
        run.cfg.alpha = ld.get_or<double>("alpha", 1.5);
        run.cfg.stable_scale = ld.get_or<double>("stable_scale", 1.0);
        run.cfg.branch_rate = ld.get_or<double>("branch_rate", 0.0);
        run.cfg.coal_rate = ld.get_or<double>("coal_rate", 0.0);
        run.cfg.band_eps = ld.get_or<double>("band_eps", 0.05);
        run.cfg.dt = ld.get_or<double>("dt", 1e-3);
        run.cfg.validate();
        if (ld.has("initial_positions")) {
            const json& arr = ld.raw("initial_positions");
            if (!arr.is_array() || arr.empty())
                throw config_error("config.limit_dual.initial_positions: nonempty array required");
            for (std::size_t i = 0; i < arr.size(); ++i)
                run.initial.push_back(cfgdetail::parse_point(
                    arr[i], "config.limit_dual.initial_positions[" + std::to_string(i) + "]",
                    run.cfg.dimension));
        } else {
            run.initial.push_back(Point{0.0, 0.0, 0.0});
        }
        cfg.limit_dual = run;
    }

    if (top.has("initial_positions")) {
        if (!cfg.domain) throw config_error("config.initial_positions: needs config.domain");
        const json& arr = top.raw("initial_positions");
        if (!arr.is_array() || arr.empty())
            throw config_error("config.initial_positions: nonempty array required");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.initial_positions.push_back(
                cfgdetail::parse_point(arr[i], "config.initial_positions[" + std::to_string(i) + "]",
                                       cfg.domain->dimension));
    }

    if (top.has("diagnostics")) {
        cfgdetail::Obj dg(top.raw("diagnostics"), "config.diagnostics");
        dg.allow({"which", "n_paths", "radii", "hill_k"});
        DiagnosticsConfig d;
        d.which = dg.get<std::string>("which");
        if (d.which != "msd" && d.which != "qv" && d.which != "averaging-gap" &&
            d.which != "branch-times" && d.which != "jump-tail")
            throw config_error("config.diagnostics.which: unknown diagnostic '" + d.which + "'");
        d.n_paths = dg.get_or<long>("n_paths", 1000);
        if (dg.has("radii")) d.radii = dg.get<std::vector<double>>("radii");
        d.hill_k = static_cast<std::size_t>(dg.get_or<long>("hill_k", 1000));
        cfg.diagnostics = d;
    }

    // kind-specific required pieces
    const auto need = [&](bool ok, const char* what) {
        if (!ok) throw config_error(std::string("config: ") + what);
    };
    switch (cfg.kind) {
        case ExperimentKind::forward:
            need(cfg.domain.has_value(), "forward needs domain");
            need(cfg.model.has_value(), "forward needs model");
            break;
        case ExperimentKind::dual:
            need(cfg.domain.has_value(), "dual needs domain");
            need(cfg.model.has_value(), "dual needs model");
            break;
        case ExperimentKind::duality_check:
            need(cfg.domain.has_value(), "duality-check needs domain");
            need(cfg.model.has_value(), "duality-check needs model");
            need(!cfg.observables.empty(), "duality-check needs observables (psi factors)");
            break;
        case ExperimentKind::scaling_table:
            need(cfg.model.has_value(), "scaling-table needs model");
            break;
        case ExperimentKind::kernel:
            need(cfg.model.has_value() &&
                     cfg.model->variant == EventModel::Variant::stable_radii,
                 "kernel needs a stable_radii model");
            break;
        case ExperimentKind::pde:
        case ExperimentKind::spde:
            need(cfg.pde.has_value(), "pde/spde needs the pde block");
            break;
        case ExperimentKind::limit_dual:
            need(cfg.limit_dual.has_value(), "limit-dual needs the limit_dual block");
            break;
        case ExperimentKind::diagnostics:
            need(cfg.diagnostics.has_value(), "diagnostics needs the diagnostics block");
            need(cfg.model.has_value(), "diagnostics needs model");
            break;
    }

    cfg.canonical = root;
    return cfg;
}

inline RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("parse_config: cannot open " + path.string());
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw config_error("parse_config: invalid JSON: " + std::string(e.what()));
    }
    return parse_config_json(root);
}

} // namespace slfv
