// Run configuration: plain-text key=value files, flag overrides, validation
// against the admissible exponent set, and a bit-stable echo format.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "euler1d/scheme.hpp"

namespace euler1d {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double gamma = 5.0 / 3.0;
    double epsilon = 0.1;
    std::optional<double> mu;  // defaults to 1% of the initial energy
    int nx = 50;
    double tfinal = 1.0;
    std::string init = "sine";  // preset name or path to a data file
    SchemeMode mode = SchemeMode::Modified;
    std::string out_dir = "out";
    unsigned long seed = 12345;
    double alpha = 0.75;
    double beta_vac = 1.2;
    double beta_rar = 0.25;
    long snap_every = 0;  // 0: choose automatically (~100 snapshots)
};

// Parse one key=value assignment (file line or flag payload).
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Read a key=value file; '#' starts a comment.
RunConfig load_config_file(const std::string& path);

// Throws ConfigError naming the violated constraint.
void validate(const RunConfig& cfg);

// Key-sorted echo; load_config applied to it reproduces the config.
std::string echo_config(const RunConfig& cfg);

RunConfig parse_config_text(const std::string& text);

const char* mode_name(SchemeMode mode);

}  // namespace euler1d
