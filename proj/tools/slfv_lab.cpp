// Experiment launcher: parses a JSON experiment config, fans replicates out
// over worker threads, and writes CSV/JSONL/snapshot outputs plus a run
// manifest. Exit codes: 0 success, 2 config error, 3 failed --check.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "slfv/config.hpp"
#include "slfv/log.hpp"
#include "slfv/runner.hpp"
#include "slfv/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    long seed = -1;
    int jobs = 1;
    std::string out;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_check) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", args.seed, "override the base seed");
    cmd->add_option("--jobs", args.jobs, "replicate workers")->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    if (with_check)
        cmd->add_flag("--check", args.check, "exit 3 when the acceptance rule fails");
}

int run_kind(const CommonArgs& args, slfv::ExperimentKind expected) {
    slfv::RunConfig cfg;
    try {
        cfg = slfv::parse_config(args.config_path);
        if (cfg.kind != expected)
            throw slfv::config_error("config kind does not match the subcommand");
        if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
        if (!args.out.empty()) cfg.output = args.out;
    } catch (const slfv::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    try {
        slfv::Runner runner(cfg, args.jobs);
        const auto manifest = runner.run();
        if (args.check && !manifest.check_passed) {
            std::fprintf(stderr, "check failed (see %s/duality.json)\n", cfg.output.c_str());
            return 3;
        }
    } catch (const slfv::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(slfv::kVersion) +
                 " - spatial Lambda-Fleming-Viot simulation laboratory"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        slfv::ExperimentKind kind;
        bool with_check;
    };
    const Sub subs[] = {
        {"forward", "forward-in-time allele frequency simulation", slfv::ExperimentKind::forward, false},
        {"dual", "branching-coalescing lineage simulation", slfv::ExperimentKind::dual, false},
        {"duality-check", "cross-validate the two simulators", slfv::ExperimentKind::duality_check, true},
        {"scaling-table", "rescaling exponents and parameters", slfv::ExperimentKind::scaling_table, false},
        {"kernel", "dump Phi / psi tables", slfv::ExperimentKind::kernel, false},
        {"pde", "deterministic Fisher-KPP reference solve", slfv::ExperimentKind::pde, false},
        {"spde", "stochastic Fisher-KPP realizations", slfv::ExperimentKind::spde, false},
        {"limit-dual", "branching Brownian/stable limit dual", slfv::ExperimentKind::limit_dual, false},
        {"diagnostics", "lineage and field diagnostics", slfv::ExperimentKind::diagnostics, false},
    };

    int rc = 0;
    std::vector<std::pair<CommonArgs, slfv::ExperimentKind>> invocations(std::size(subs));
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        auto* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        invocations[i].second = subs[i].kind;
        add_common(cmd, invocations[i].first, subs[i].with_check);
        const std::size_t idx = i;
        cmd->callback([&invocations, idx, &rc]() {
            rc = run_kind(invocations[idx].first, invocations[idx].second);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return rc;
}
