#include "euler1d/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "euler1d/init.hpp"

namespace euler1d {

const char* mode_name(SchemeMode mode) {
    return mode == SchemeMode::Modified ? "modified" : "plain-godunov";
}

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "gamma")
            cfg.gamma = std::stod(value);
        else if (key == "epsilon")
            cfg.epsilon = std::stod(value);
        else if (key == "mu") {
            if (value == "auto")
                cfg.mu.reset();
            else
                cfg.mu = std::stod(value);
        } else if (key == "nx")
            cfg.nx = std::stoi(value);
        else if (key == "tfinal")
            cfg.tfinal = std::stod(value);
        else if (key == "init")
            cfg.init = value;
        else if (key == "mode") {
            if (value == "modified")
                cfg.mode = SchemeMode::Modified;
            else if (value == "plain-godunov")
                cfg.mode = SchemeMode::PlainGodunov;
            else
                throw ConfigError("mode must be 'modified' or 'plain-godunov', got '" + value +
                                  "'");
        } else if (key == "out")
            cfg.out_dir = value;
        else if (key == "seed")
            cfg.seed = std::stoul(value);
        else if (key == "alpha")
            cfg.alpha = std::stod(value);
        else if (key == "beta_vac")
            cfg.beta_vac = std::stod(value);
        else if (key == "beta_rar")
            cfg.beta_rar = std::stod(value);
        else if (key == "snap_every")
            cfg.snap_every = std::stol(value);
        else
            throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for " + key + ": " + value);
    } catch (const std::out_of_range&) {
        throw ConfigError("value out of range for " + key + ": " + value);
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + line);
        apply_key_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const RunConfig& cfg) {
    if (!(cfg.gamma > 1.0 && cfg.gamma <= 5.0 / 3.0))
        throw ConfigError("gamma must lie in (1, 5/3]");
    if (cfg.epsilon <= 0.0) throw ConfigError("epsilon must be positive");
    if (cfg.mu && *cfg.mu <= 0.0) throw ConfigError("mu must be positive");
    if (cfg.nx < 2) throw ConfigError("nx must be at least 2");
    if (cfg.tfinal <= 0.0) throw ConfigError("tfinal must be positive");
    if (cfg.snap_every < 0) throw ConfigError("snap_every must be nonnegative");
    if (!(cfg.alpha > 0.5 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (1/2, 1)");
    const double theta = (cfg.gamma - 1.0) / 2.0;
    if (!(cfg.beta_vac > 1.0 && cfg.beta_vac < 1.0 / (2.0 * theta)))
        throw ConfigError("beta_vac must lie in (1, 1/(2 theta))");
    if (!(cfg.beta_rar > 0.0)) throw ConfigError("beta_rar must be positive");
    if (!(cfg.beta_rar < cfg.alpha)) throw ConfigError("beta_rar must satisfy beta < alpha");
    if (!(0.5 + cfg.beta_rar / 2.0 < cfg.alpha))
        throw ConfigError("beta_rar must satisfy 1/2 + beta/2 < alpha");
    if (!(cfg.beta_rar < 2.0 / (cfg.gamma + 5.0)))
        throw ConfigError("beta_rar must satisfy beta < 2/(gamma+5)");
    if (!((9.0 - 3.0 * cfg.gamma) * cfg.beta_rar / 2.0 < cfg.alpha))
        throw ConfigError("beta_rar must satisfy (9-3 gamma) beta/2 < alpha");

    const auto names = preset_names();
    const bool known = std::find(names.begin(), names.end(), cfg.init) != names.end();
    if (!known) {
        std::ifstream probe(cfg.init);
        if (!probe) throw ConfigError("init is neither a preset nor a readable file: " + cfg.init);
    }
}

std::string echo_config(const RunConfig& cfg) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::map<std::string, std::string> kv;
    kv["alpha"] = num(cfg.alpha);
    kv["beta_rar"] = num(cfg.beta_rar);
    kv["beta_vac"] = num(cfg.beta_vac);
    kv["epsilon"] = num(cfg.epsilon);
    kv["gamma"] = num(cfg.gamma);
    kv["init"] = cfg.init;
    kv["mode"] = mode_name(cfg.mode);
    kv["mu"] = cfg.mu ? num(*cfg.mu) : "auto";
    kv["nx"] = std::to_string(cfg.nx);
    kv["out"] = cfg.out_dir;
    kv["seed"] = std::to_string(cfg.seed);
    kv["snap_every"] = std::to_string(cfg.snap_every);
    kv["tfinal"] = num(cfg.tfinal);
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

}  // namespace euler1d
