// Command-line driver: single runs, refinement sweeps, preset listing and
// the acceptance suite.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "criteria.hpp"
#include "euler1d/driver.hpp"
#include "euler1d/init.hpp"

namespace {

struct FlagSet {
    std::string config_path;
    std::string gamma, epsilon, mu, nx, tfinal, init, mode, out, seed;
    std::string alpha, beta_vac, beta_rar, snap_every;
};

void add_run_options(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--config", f.config_path, "key=value config file");
    cmd->add_option("--gamma", f.gamma, "adiabatic exponent in (1, 5/3]");
    cmd->add_option("--epsilon", f.epsilon, "attractor slack");
    cmd->add_option("--mu", f.mu, "energy margin (or 'auto')");
    cmd->add_option("--nx", f.nx, "half cell count");
    cmd->add_option("--tfinal", f.tfinal, "final time");
    cmd->add_option("--init", f.init, "initial-data preset or file");
    cmd->add_option("--mode", f.mode, "modified | plain-godunov");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "seed for randomized suites");
    cmd->add_option("--alpha", f.alpha, "rarefaction-fan spacing exponent");
    cmd->add_option("--beta-vac", f.beta_vac, "vacuum threshold exponent");
    cmd->add_option("--beta-rar", f.beta_rar, "near-vacuum wall exponent");
    cmd->add_option("--snap-every", f.snap_every, "snapshot cadence in steps");
}

euler1d::RunConfig resolve_config(const FlagSet& f) {
    euler1d::RunConfig cfg;
    if (!f.config_path.empty()) cfg = euler1d::load_config_file(f.config_path);
    auto apply = [&cfg](const char* key, const std::string& v) {
        if (!v.empty()) euler1d::apply_key_value(cfg, key, v);
    };
    apply("gamma", f.gamma);
    apply("epsilon", f.epsilon);
    apply("mu", f.mu);
    apply("nx", f.nx);
    apply("tfinal", f.tfinal);
    apply("init", f.init);
    apply("mode", f.mode);
    apply("out", f.out);
    apply("seed", f.seed);
    apply("alpha", f.alpha);
    apply("beta_vac", f.beta_vac);
    apply("beta_rar", f.beta_rar);
    apply("snap_every", f.snap_every);
    euler1d::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D isentropic gas dynamics in [0,1] with reflecting walls"};
    app.require_subcommand(1);

    FlagSet run_flags, sweep_flags;
    std::vector<int> resolutions;
    std::vector<int> check_ids;

    CLI::App* cmd_run = app.add_subcommand("run", "run one simulation");
    add_run_options(cmd_run, run_flags);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "refinement sweep with a report");
    add_run_options(cmd_sweep, sweep_flags);
    cmd_sweep->add_option("--resolutions", resolutions, "nx doublings, e.g. 25 50 100");

    CLI::App* cmd_presets = app.add_subcommand("presets", "list initial-data presets");

    CLI::App* cmd_check = app.add_subcommand("check", "run the acceptance suite");
    cmd_check->add_option("--only", check_ids, "criterion ids to run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const euler1d::RunConfig cfg = resolve_config(run_flags);
            const auto art = euler1d::run_from_config(cfg);
            std::printf("run complete: %ld steps, output in %s\n",
                        art.trajectory.grid.n_steps, art.out_dir.c_str());
            return 0;
        }
        if (cmd_sweep->parsed()) {
            const euler1d::RunConfig cfg = resolve_config(sweep_flags);
            const auto res = euler1d::sweep(cfg, resolutions);
            std::fputs(res.report.c_str(), stdout);
            return 0;
        }
        if (cmd_presets->parsed()) {
            for (const std::string& name : euler1d::preset_names())
                std::printf("%s\n", name.c_str());
            return 0;
        }
        if (cmd_check->parsed()) {
            const int failures = euler1d::acceptance::run_criteria(check_ids, std::cout);
            return failures == 0 ? 0 : 1;
        }
    } catch (const euler1d::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const euler1d::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
