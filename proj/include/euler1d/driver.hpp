// Run orchestration: config -> parameters -> simulation -> output artifacts,
// plus parallel refinement sweeps.
#pragma once

#include "euler1d/config.hpp"
#include "euler1d/diagnostics.hpp"

namespace euler1d {

struct RunArtifacts {
    Trajectory trajectory;
    std::string out_dir;
};

// Derive the model constants for a config (preset or data file).
ModelParams params_from_config(const RunConfig& cfg);
InitSampler sampler_from_config(const RunConfig& cfg);

// Full run with file output (config echo, ledger, snapshots) under
// cfg.out_dir.  Extra observers, when given, are attached to the simulation.
RunArtifacts run_from_config(const RunConfig& cfg,
                             const std::vector<StripObserver*>& observers = {},
                             bool write_files = true);

struct SweepResult {
    std::vector<int> resolutions;
    std::vector<ConvergencePair> pairs;
    std::vector<double> observed_order_rho;  // log2 ratios of successive distances
    std::string report;                      // formatted table
};

// Runs the config at each resolution (one worker per resolution) and reports
// L1 distances between successive pairs; resolutions must be nested
// doublings.  Writes report.txt under cfg.out_dir when write_files is set.
SweepResult sweep(const RunConfig& cfg, const std::vector<int>& resolutions,
                  bool write_files = true);

}  // namespace euler1d
