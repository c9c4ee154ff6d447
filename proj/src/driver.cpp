#include "euler1d/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include "euler1d/init.hpp"
#include "euler1d/io.hpp"

namespace euler1d {

InitSampler sampler_from_config(const RunConfig& cfg) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), cfg.init) != names.end())
        return make_preset(cfg.init, cfg.gamma);
    return load_init_file(cfg.init);
}

ModelParams params_from_config(const RunConfig& cfg) {
    return derive_params(sampler_from_config(cfg), cfg.gamma, cfg.epsilon, cfg.mu);
}

RunArtifacts run_from_config(const RunConfig& cfg, const std::vector<StripObserver*>& observers,
                             bool write_files) {
    validate(cfg);
    const ModelParams params = params_from_config(cfg);
    const Grid grid = make_grid(params, cfg.tfinal, cfg.nx);

    SchemeOptions opts;
    opts.mode = cfg.mode;
    opts.alpha = cfg.alpha;
    opts.beta_vac = cfg.beta_vac;
    opts.beta_rar = cfg.beta_rar;

    Simulation sim(params, grid, opts, sampler_from_config(cfg));
    for (StripObserver* obs : observers) sim.add_observer(obs);

    const long snap_every =
        cfg.snap_every > 0 ? cfg.snap_every : std::max<long>(1, grid.n_steps / 100);

    RunArtifacts art;
    art.out_dir = cfg.out_dir;
    if (write_files) {
        ensure_directory(cfg.out_dir);
        write_text_file(cfg.out_dir + "/config_echo.txt", echo_config(cfg));
    }
    art.trajectory = run_to_completion(sim, snap_every);
    if (write_files) {
        write_ledger(cfg.out_dir, art.trajectory.rows);
        for (const Snapshot& s : art.trajectory.snapshots) write_snapshot(cfg.out_dir, s);
    }
    return art;
}

SweepResult sweep(const RunConfig& cfg, const std::vector<int>& resolutions, bool write_files) {
    if (resolutions.size() < 2)
        throw ConfigError("sweep needs at least two resolutions");
    for (std::size_t i = 0; i + 1 < resolutions.size(); ++i)
        if (resolutions[i + 1] != 2 * resolutions[i])
            throw ConfigError("sweep resolutions must be successive doublings");

    // One worker per resolution; each run owns its output directory.
    std::vector<std::future<RunArtifacts>> futures;
    for (int nx : resolutions) {
        RunConfig sub = cfg;
        sub.nx = nx;
        sub.out_dir = cfg.out_dir + "/nx" + std::to_string(nx);
        futures.push_back(std::async(std::launch::async, [sub, write_files]() {
            return run_from_config(sub, {}, write_files);
        }));
    }
    std::vector<RunArtifacts> runs;
    runs.reserve(futures.size());
    for (auto& f : futures) runs.push_back(f.get());

    SweepResult result;
    result.resolutions = resolutions;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i)
        result.pairs.push_back(
            self_convergence(runs[i].trajectory, runs[i + 1].trajectory));
    for (std::size_t i = 0; i + 1 < result.pairs.size(); ++i) {
        const double r = result.pairs[i].l1_rho / std::max(result.pairs[i + 1].l1_rho, 1e-300);
        result.observed_order_rho.push_back(std::log2(r));
    }

    std::string rep = "pair,l1_rho,l1_m\n";
    char buf[128];
    for (const ConvergencePair& pr : result.pairs) {
        std::snprintf(buf, sizeof(buf), "%d/%d,%.16e,%.16e\n", pr.nx_coarse, pr.nx_fine,
                      pr.l1_rho, pr.l1_m);
        rep += buf;
    }
    for (std::size_t i = 0; i < result.observed_order_rho.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "order_rho_%zu=%.6f\n", i,
                      result.observed_order_rho[i]);
        rep += buf;
    }
    result.report = rep;
    if (write_files) {
        ensure_directory(cfg.out_dir);
        write_text_file(cfg.out_dir + "/report.txt", rep);
    }
    return result;
}

}  // namespace euler1d
