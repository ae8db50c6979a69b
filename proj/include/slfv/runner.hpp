#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include "slfv/analysis.hpp"
#include "slfv/config.hpp"
#include "slfv/io.hpp"
#include "slfv/limit_solvers.hpp"
#include "slfv/version.hpp"

namespace slfv {

struct RunManifest {
    std::string config_hash;
    std::string code_version;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> replicate_seeds;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;
    bool check_passed = true; // duality --check verdict

    json to_json() const {
        json j;
        j["config_hash"] = config_hash;
        j["code_version"] = code_version;
        j["base_seed"] = base_seed;
        j["replicate_seeds"] = replicate_seeds;
        j["started_at"] = started_at;
        j["finished_at"] = finished_at;
        j["outputs"] = outputs;
        j["check_passed"] = check_passed;
        return j;
    }
};

namespace rundetail {

inline std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Deterministic replicate fan-out: work items claim indices from a counter;
/// every replicate derives its own stream from (base seed, index), so the
/// schedule cannot influence any result.
template <typename F>
void parallel_for(long n, int jobs, F&& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const int workers = static_cast<int>(std::min<long>(jobs, n));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const long i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace rundetail

/// Experiment executor. Results are written atomically-enough for the
/// determinism contract: replicate outputs land in files ordered by
/// replicate index, independent of the worker schedule.
class Runner {
  public:
    Runner(RunConfig cfg, int jobs) : cfg_(std::move(cfg)), jobs_(std::max(1, jobs)) {}

    RunManifest run() {
        namespace fs = std::filesystem;
        fs::create_directories(cfg_.output);
        manifest_.config_hash = rundetail::hex64(config_hash(cfg_.canonical));
        manifest_.code_version = kVersion;
        manifest_.base_seed = cfg_.seed;
        for (long i = 0; i < cfg_.replicates; ++i)
            manifest_.replicate_seeds.push_back(derive_seed(cfg_.seed, static_cast<std::uint64_t>(i)));
        manifest_.started_at = rundetail::timestamp_now();
        write_manifest(); // manifest precedes results
        try {
            dispatch();
        } catch (...) {
            for (const auto& f : manifest_.outputs) {
                std::error_code ec;
                fs::remove(fs::path(cfg_.output) / f, ec);
            }
            std::error_code ec;
            fs::remove(fs::path(cfg_.output) / "manifest.json", ec);
            throw;
        }
        manifest_.finished_at = rundetail::timestamp_now();
        write_manifest();
        return manifest_;
    }

    const RunManifest& manifest() const { return manifest_; }

  private:
    std::filesystem::path out_path(const std::string& name) {
        manifest_.outputs.push_back(name);
        return std::filesystem::path(cfg_.output) / name;
    }

    void write_manifest() {
        std::ofstream out(std::filesystem::path(cfg_.output) / "manifest.json", std::ios::binary);
        out << manifest_.to_json().dump(2) << '\n';
    }

    void dispatch() {
        switch (cfg_.kind) {
            case ExperimentKind::forward: run_forward_kind(); break;
            case ExperimentKind::dual: run_dual_kind(); break;
            case ExperimentKind::duality_check: run_duality_kind(); break;
            case ExperimentKind::scaling_table: run_scaling_table(); break;
            case ExperimentKind::kernel: run_kernel_dump(); break;
            case ExperimentKind::pde: run_pde_kind(false); break;
            case ExperimentKind::spde: run_pde_kind(true); break;
            case ExperimentKind::limit_dual: run_limit_dual_kind(); break;
            case ExperimentKind::diagnostics: run_diagnostics_kind(); break;
        }
    }

    double default_cell_width() const {
        const double r_min = cfg_.model->variant == EventModel::Variant::fixed_radius
                                 ? cfg_.model->radius
                                 : 1.0;
        return r_min / 4.0; // unscaled; the rescale plan divides by n^beta downstream
    }

    // ---- forward ---------------------------------------------------------
    void run_forward_kind() {
        const double h = cfg_.cell_width > 0.0 ? cfg_.cell_width : default_cell_width();
        struct RepResult {
            std::vector<std::vector<double>> rows;
            std::vector<GridField> snaps;
            std::vector<double> snap_times;
        };
        std::vector<RepResult> results(static_cast<std::size_t>(cfg_.replicates));

        const bool rescaled = cfg_.rescale_n.has_value();
        ForwardRescalePlan plan;
        if (rescaled)
            plan = rescaled_config(*cfg_.model, *cfg_.rescale_n, *cfg_.domain, cfg_.horizon,
                                   cfg_.cell_width > 0.0 ? cfg_.cell_width : 0.0);

        rundetail::parallel_for(cfg_.replicates, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            RepResult& res = results[static_cast<std::size_t>(rep)];
            if (!rescaled) {
                ForwardState state(*cfg_.domain, h, cfg_.initial);
                auto run = run_forward(state, *cfg_.model, cfg_.horizon, cfg_.observables,
                                       cfg_.sample_times, rng,
                                       ForwardRunOptions{0.0, cfg_.snapshots});
                for (std::size_t k = 0; k < run.sample_times.size(); ++k) {
                    std::vector<double> row{static_cast<double>(rep), run.sample_times[k]};
                    for (const auto& s : run.series) row.push_back(s.wf[k]);
                    res.rows.push_back(std::move(row));
                }
                res.snaps = std::move(run.snapshots);
                res.snap_times = run.sample_times;
            } else {
                ForwardState state = make_rescaled_state(plan, cfg_.initial, *cfg_.domain);
                std::vector<double> unscaled_samples;
                for (double t : cfg_.sample_times) unscaled_samples.push_back(t * plan.params.time_factor());
                std::vector<RescaledObservable> obs;
                for (const auto& spec : cfg_.observables) obs.push_back({spec, &plan});
                run_forward_with_sampler(
                    state, plan.scaled_model, plan.unscaled_horizon, unscaled_samples, rng,
                    [&](const ForwardState& s) {
                        std::vector<double> row{static_cast<double>(rep),
                                                s.time / plan.params.time_factor()};
                        for (const auto& o : obs) {
                            double wf = 0.0;
                            double wbf = 0.0;
                            double wq = 0.0;
                            o.measure(s, wf, wbf, wq);
                            row.push_back(wf);
                            row.push_back(wbf);
                            row.push_back(wq);
                        }
                        res.rows.push_back(std::move(row));
                        if (cfg_.snapshots) {
                            res.snaps.push_back(s.w);
                            res.snap_times.push_back(s.time / plan.params.time_factor());
                        }
                    });
            }
        });

        std::vector<std::string> header{"replicate", "time"};
        for (std::size_t i = 0; i < cfg_.observables.size(); ++i) {
            header.push_back("obs" + std::to_string(i) + "_wf");
            if (rescaled) {
                header.push_back("obs" + std::to_string(i) + "_wbar_f");
                header.push_back("obs" + std::to_string(i) + "_wbar_var_f2");
            }
        }
        CsvWriter csv(out_path("observables.csv"), header);
        for (const auto& res : results)
            for (const auto& row : res.rows) csv.row(row);
        for (long rep = 0; rep < cfg_.replicates; ++rep) {
            const auto& res = results[static_cast<std::size_t>(rep)];
            for (std::size_t k = 0; k < res.snaps.size(); ++k) {
                char name[64];
                std::snprintf(name, sizeof(name), "snap_rep%04ld_%03zu.snap", rep, k);
                write_snapshot(out_path(name), res.snaps[k], res.snap_times[k],
                               manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            }
        }
    }

    // ---- dual ------------------------------------------------------------
    void run_dual_kind() {
        const bool rescaled = cfg_.rescale_n.has_value();
        DualRescalePlan plan;
        EventModel model = *cfg_.model;
        double horizon = cfg_.horizon;
        double space = 1.0;
        std::vector<double> samples = cfg_.sample_times;
        if (rescaled) {
            plan = rescaled_dual_config(*cfg_.model, *cfg_.rescale_n);
            model = plan.scaled_model;
            horizon = plan.unscaled_horizon(cfg_.horizon);
            space = plan.params.space_factor();
            for (auto& t : samples) t *= plan.params.time_factor();
        }
        std::vector<std::string> lines(static_cast<std::size_t>(cfg_.replicates));
        rundetail::parallel_for(cfg_.replicates, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            std::vector<Point> init = cfg_.initial_positions;
            if (init.empty()) {
                Point c{0.0, 0.0, 0.0};
                for (int i = 0; i < cfg_.domain->dimension; ++i) c[i] = 0.5 * cfg_.domain->side_length;
                init.push_back(c);
            }
            if (rescaled) {
                for (auto& p : init)
                    for (int i = 0; i < cfg_.domain->dimension; ++i) p[i] /= space;
            }
            TorusDomain sim_domain = *cfg_.domain;
            if (rescaled)
                sim_domain = TorusDomain(cfg_.domain->dimension, cfg_.domain->side_length / space);
            DualSimulator sim(model, sim_domain, init, rng);
            auto traj = run_dual(sim, horizon, samples, DualRunOptions{cfg_.record_positions});
            std::string block;
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                std::vector<Point> scaled;
                const std::vector<Point>* pos = nullptr;
                if (cfg_.record_positions) {
                    scaled = traj.positions[k];
                    for (auto& p : scaled)
                        for (int i = 0; i < cfg_.domain->dimension; ++i) p[i] *= space;
                    pos = &scaled;
                }
                block += dual_record(traj.times[k] / (rescaled ? plan.params.time_factor() : 1.0),
                                     traj.particle_counts[k], traj.branches_at[k],
                                     traj.coalescences_at[k], pos, cfg_.domain->dimension);
                block += '\n';
            }
            lines[static_cast<std::size_t>(rep)] = std::move(block);
        });
        for (long rep = 0; rep < cfg_.replicates; ++rep) {
            char name[64];
            std::snprintf(name, sizeof(name), "dual_rep%04ld.jsonl", rep);
            std::ofstream out(out_path(name), std::ios::binary);
            out << lines[static_cast<std::size_t>(rep)];
        }
    }

    // ---- duality check ----------------------------------------------------
    void run_duality_kind() {
        DualityCheckConfig dc;
        dc.model = *cfg_.model;
        dc.domain = *cfg_.domain;
        dc.cell_width = cfg_.cell_width > 0.0 ? cfg_.cell_width : default_cell_width();
        dc.initial = cfg_.initial;
        for (int j = 0; j < cfg_.duality_k; ++j)
            dc.psi.push_back(cfg_.observables[static_cast<std::size_t>(j) % cfg_.observables.size()]);
        dc.horizon = cfg_.horizon;
        dc.replicates = cfg_.replicates;
        dc.seed = cfg_.seed;
        const DualityReport rep = duality_check(dc);
        manifest_.check_passed = std::abs(rep.z) <= 3.0;

        json j;
        j["experiment"] = "duality-check";
        j["k"] = cfg_.duality_k;
        j["forward"] = {{"estimate", rep.forward_side.estimate},
                        {"std_error", rep.forward_side.std_error},
                        {"replicates", rep.forward_side.n_replicates}};
        j["dual"] = {{"estimate", rep.dual_side.estimate},
                     {"std_error", rep.dual_side.std_error},
                     {"replicates", rep.dual_side.n_replicates}};
        j["z"] = rep.z;
        std::ofstream jf(out_path("duality.json"), std::ios::binary);
        jf << j.dump(2) << '\n';

        CsvWriter csv(out_path("duality.csv"),
                      {"k", "forward_estimate", "forward_se", "dual_estimate", "dual_se", "z"});
        csv.row({static_cast<double>(cfg_.duality_k), rep.forward_side.estimate,
                 rep.forward_side.std_error, rep.dual_side.estimate, rep.dual_side.std_error, rep.z});
    }

    // ---- scaling table -----------------------------------------------------
    void run_scaling_table() {
        CsvWriter csv(out_path("scaling_table.csv"),
                      {"n", "alpha", "beta", "gamma", "delta", "u_n", "s_n"});
        const long n = cfg_.rescale_n.value_or(1);
        const auto p = scaling_params(n, *cfg_.model);
        const double alpha =
            cfg_.model->variant == EventModel::Variant::stable_radii ? cfg_.model->alpha : 2.0;
        csv.row({static_cast<double>(n), alpha, p.beta, p.gamma, p.delta, p.u_n, p.s_n});
    }

    // ---- kernel dump -------------------------------------------------------
    void run_kernel_dump() {
        const int d = cfg_.domain ? cfg_.domain->dimension : 1;
        const double alpha = cfg_.model->alpha;
        {
            CsvWriter csv(out_path("phi.csv"), {"m", "phi"});
            for (int i = 0; i < 50; ++i) {
                const double m = 0.1 * std::pow(100.0, i / 49.0); // log-spaced [0.1, 10]
                csv.row({m, phi_kernel(d, alpha, m)});
            }
        }
        {
            CsvWriter csv(out_path("psi.csv"), {"theta", "psi_limit", "psi_n"});
            const long n = cfg_.rescale_n.value_or(0);
            for (int i = 0; i < 50; ++i) {
                const double theta = 0.1 * std::pow(1000.0, i / 49.0); // [0.1, 100]
                csv.row({theta, levy_symbol(d, alpha, theta, 0),
                         n > 0 ? levy_symbol(d, alpha, theta, n) : 0.0});
            }
        }
    }

    // ---- pde / spde --------------------------------------------------------
    void run_pde_kind(bool stochastic) {
        PdeConfig pc = *cfg_.pde;
        GridField w0(pc.domain, pc.dx);
        w0.fill(cfg_.initial);
        KernelSpec spec;
        if (cfg_.pde_fractional) {
            GridField probe(pc.domain, pc.dx);
            std::vector<std::size_t> shape(static_cast<std::size_t>(pc.domain.dimension),
                                           static_cast<std::size_t>(probe.cells_per_side));
            spec = KernelSpec::make(pc.domain.dimension, cfg_.pde_alpha, cfg_.pde_u,
                                    pc.domain.side_length, shape);
        }
        const long reps = stochastic ? cfg_.replicates : 1;
        std::vector<std::vector<std::vector<double>>> rows(static_cast<std::size_t>(reps));
        std::vector<SolverResult> solves(static_cast<std::size_t>(reps));
        rundetail::parallel_for(reps, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds.empty()
                        ? derive_seed(cfg_.seed, static_cast<std::uint64_t>(rep))
                        : manifest_.replicate_seeds[static_cast<std::size_t>(
                              std::min<std::size_t>(static_cast<std::size_t>(rep),
                                                    manifest_.replicate_seeds.size() - 1))]);
            SolverResult res;
            if (cfg_.pde_fractional) {
                res = solve_fractional_fkpp(pc, spec, w0, cfg_.sample_times,
                                            stochastic ? &rng : nullptr);
            } else if (stochastic) {
                res = solve_fkpp_stochastic_1d(pc, w0, cfg_.sample_times, rng);
            } else {
                res = solve_fkpp(pc, w0, cfg_.sample_times);
            }
            auto& rrows = rows[static_cast<std::size_t>(rep)];
            for (std::size_t k = 0; k < res.times.size(); ++k) {
                std::vector<double> row{static_cast<double>(rep), res.times[k]};
                for (const auto& f : cfg_.observables) row.push_back(res.snapshots[k].inner_product(f));
                rrows.push_back(std::move(row));
            }
            solves[static_cast<std::size_t>(rep)] = std::move(res);
        });
        std::vector<std::string> header{"replicate", "time"};
        for (std::size_t i = 0; i < cfg_.observables.size(); ++i)
            header.push_back("obs" + std::to_string(i) + "_wf");
        CsvWriter csv(out_path("series.csv"), header);
        for (const auto& rrows : rows)
            for (const auto& row : rrows) csv.row(row);
        if (cfg_.snapshots) {
            for (long rep = 0; rep < reps; ++rep) {
                const auto& res = solves[static_cast<std::size_t>(rep)];
                for (std::size_t k = 0; k < res.times.size(); ++k) {
                    char name[64];
                    std::snprintf(name, sizeof(name), "snap_rep%04ld_%03zu.snap", rep, k);
                    write_snapshot(out_path(name), res.snapshots[k], res.times[k], cfg_.seed);
                }
            }
        }
    }

    // ---- limit dual --------------------------------------------------------
    void run_limit_dual_kind() {
        const auto& ld = *cfg_.limit_dual;
        std::vector<std::vector<std::vector<double>>> rows(static_cast<std::size_t>(cfg_.replicates));
        rundetail::parallel_for(cfg_.replicates, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            auto res = simulate_limit_dual(ld.cfg, ld.initial, cfg_.horizon, cfg_.sample_times, rng,
                                           false);
            auto& rrows = rows[static_cast<std::size_t>(rep)];
            for (std::size_t k = 0; k < res.times.size(); ++k)
                rrows.push_back({static_cast<double>(rep), res.times[k],
                                 static_cast<double>(res.particle_counts[k])});
        });
        CsvWriter csv(out_path("limit_dual.csv"), {"replicate", "time", "N"});
        for (const auto& rrows : rows)
            for (const auto& row : rrows) csv.row(row);
    }

    // ---- diagnostics -------------------------------------------------------
    void run_diagnostics_kind() {
        const auto& dg = *cfg_.diagnostics;
        const long n = cfg_.rescale_n.value_or(1);
        const auto params = scaling_params(n, *cfg_.model);
        EventModel scaled = *cfg_.model;
        scaled.impact = params.u_n;
        scaled.selection = params.s_n;
        const int d = cfg_.domain ? cfg_.domain->dimension : 1;

        if (dg.which == "msd") {
            auto rep = lineage_msd(scaled, d, params.space_factor(), params.time_factor(),
                                   cfg_.sample_times, dg.n_paths, cfg_.seed);
            CsvWriter csv(out_path("msd.csv"), {"time", "variance", "variance_se"});
            for (std::size_t k = 0; k < rep.times.size(); ++k)
                csv.row({rep.times[k], rep.variance[k], rep.variance_se[k]});
            json j;
            j["sign_test_p"] = rep.sign_test_p;
            std::ofstream jf(out_path("msd.json"), std::ios::binary);
            jf << j.dump(2) << '\n';
        } else if (dg.which == "branch-times") {
            auto times = first_branch_times(scaled, d, params.time_factor(), dg.n_paths, cfg_.seed);
            CsvWriter csv(out_path("branch_times.csv"), {"path", "first_branch_time"});
            for (std::size_t i = 0; i < times.size(); ++i)
                csv.row({static_cast<double>(i), times[i]});
        } else if (dg.which == "jump-tail") {
            auto mags = lineage_jump_magnitudes(scaled, d, params.space_factor(),
                                                cfg_.horizon * params.time_factor(), dg.n_paths,
                                                cfg_.seed);
            const double hill = hill_estimator(mags, std::min(dg.hill_k, mags.size() / 2));
            CsvWriter csv(out_path("jump_tail.csv"), {"n_jumps", "hill_k", "hill_alpha"});
            csv.row({static_cast<double>(mags.size()),
                     static_cast<double>(std::min(dg.hill_k, mags.size() / 2)), hill});
        } else if (dg.which == "qv") {
            run_qv_diagnostic(scaled, params);
        } else if (dg.which == "averaging-gap") {
            run_gap_diagnostic();
        }
    }

    void run_qv_diagnostic(const EventModel& /*scaled*/, const ScalingParams& /*params*/) {
        ForwardRescalePlan plan = rescaled_config(*cfg_.model, cfg_.rescale_n.value_or(1),
                                                  *cfg_.domain, cfg_.horizon, cfg_.cell_width);
        const double R = plan.averaging_radius;
        const double qv_const = 4.0 * R * R * cfg_.model->impact * cfg_.model->impact;
        std::vector<double> unscaled_samples;
        for (double t : cfg_.sample_times) unscaled_samples.push_back(t * plan.params.time_factor());
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(cfg_.replicates));
        rundetail::parallel_for(cfg_.replicates, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            ForwardState state = make_rescaled_state(plan, cfg_.initial, *cfg_.domain);
            RescaledObservable obs{cfg_.observables.at(0), &plan};
            std::vector<double> times;
            std::vector<double> series;
            std::vector<double> integrand;
            run_forward_with_sampler(state, plan.scaled_model, plan.unscaled_horizon,
                                     unscaled_samples, rng, [&](const ForwardState& s) {
                                         double wf = 0.0;
                                         double wbf = 0.0;
                                         double wq = 0.0;
                                         obs.measure(s, wf, wbf, wq);
                                         times.push_back(s.time / plan.params.time_factor());
                                         series.push_back(wbf);
                                         integrand.push_back(wq);
                                     });
            const auto est = qv_estimate(times, series, integrand, qv_const);
            rows[static_cast<std::size_t>(rep)] = {static_cast<double>(rep), est.realized,
                                                   est.plug_in, est.ratio};
        });
        CsvWriter csv(out_path("qv.csv"), {"replicate", "realized", "plug_in", "ratio"});
        for (const auto& row : rows) csv.row(row);
    }

    void run_gap_diagnostic() {
        ForwardRescalePlan plan = rescaled_config(*cfg_.model, cfg_.rescale_n.value_or(1),
                                                  *cfg_.domain, cfg_.horizon, cfg_.cell_width);
        const auto& dg = *cfg_.diagnostics;
        if (dg.radii.empty()) throw config_error("diagnostics.averaging-gap: radii required");
        Point center{0.0, 0.0, 0.0};
        for (int i = 0; i < cfg_.domain->dimension; ++i)
            center[i] = 0.5 * plan.unscaled_domain.side_length;
        const double base_r = plan.averaging_radius;
        std::vector<std::vector<double>> gaps(dg.radii.size());
        for (auto& g : gaps) g.resize(static_cast<std::size_t>(cfg_.replicates));
        rundetail::parallel_for(cfg_.replicates, jobs_, [&](long rep) {
            Rng rng(manifest_.replicate_seeds[static_cast<std::size_t>(rep)]);
            ForwardState state = make_rescaled_state(plan, cfg_.initial, *cfg_.domain);
            run_forward_with_sampler(state, plan.scaled_model, plan.unscaled_horizon, {}, rng,
                                     [](const ForwardState&) {});
            for (std::size_t ri = 0; ri < dg.radii.size(); ++ri) {
                const double r_unscaled = dg.radii[ri] / plan.params.space_factor();
                gaps[ri][static_cast<std::size_t>(rep)] =
                    averaging_gap(state, center, r_unscaled, base_r);
            }
        });
        CsvWriter csv(out_path("averaging_gap.csv"), {"radius", "gap_mean", "gap_se"});
        for (std::size_t ri = 0; ri < dg.radii.size(); ++ri) {
            auto [m, se] = mean_and_se(gaps[ri]);
            csv.row({dg.radii[ri], m, se});
        }
    }

    RunConfig cfg_;
    int jobs_;
    RunManifest manifest_;
};

inline RunManifest run_experiment(const RunConfig& cfg, int jobs = 1) {
    Runner runner(cfg, jobs);
    return runner.run();
}

} // namespace slfv
