#include "euler1d/init.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace euler1d {

std::vector<std::string> preset_names() {
    return {"constant",        "sine",       "riemann",          "large-oscillation",
            "near-vacuum",     "wall-shock", "wall-rarefaction", "stationary-shock"};
}

InitSampler make_preset(const std::string& name, double gamma) {
    if (name == "constant") {
        return [](double) { return GasState{1.0, 0.0}; };
    }
    if (name == "sine") {
        return [](double x) { return GasState{1.0 + 0.3 * std::sin(2.0 * M_PI * x), 0.0}; };
    }
    if (name == "riemann") {
        return [](double x) {
            return x < 0.5 ? GasState{1.0, 0.0} : GasState{0.125, 0.0};
        };
    }
    if (name == "large-oscillation") {
        // Narrow momentum spike: the initial envelope constant exceeds the
        // asymptotic one while the spike carries little energy.
        return [](double x) {
            const double s = (x - 0.3) / 8e-4;
            return GasState{1.0, 16.0 * std::exp(-s * s)};
        };
    }
    if (name == "near-vacuum") {
        return [](double x) {
            const double s = std::sin(M_PI * x);
            const double s2 = s * s;
            return GasState{1e-4 + (s2 * s2) * (s2 * s2), 0.0};
        };
    }
    if (name == "wall-shock") {
        return [](double) { return GasState{1.0, 1.0}; };
    }
    if (name == "wall-rarefaction") {
        return [](double) { return GasState{1.0, -1.0}; };
    }
    if (name == "stationary-shock") {
        // States tied by the jump conditions with zero front speed at
        // x = 1/2: equal momentum flux and equal mass flux.
        const double rho_l = 1.0;
        const double rho_r = 2.0;
        const double pl = std::pow(rho_l, gamma) / gamma;
        const double pr = std::pow(rho_r, gamma) / gamma;
        const double mstar = std::sqrt((pr - pl) * rho_l * rho_r / (rho_r - rho_l));
        return [rho_l, rho_r, mstar](double x) {
            return x < 0.5 ? GasState{rho_l, mstar} : GasState{rho_r, mstar};
        };
    }
    throw std::invalid_argument("unknown preset: " + name);
}

InitSampler load_init_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open initial-data file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, rhos, ms;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(ss, tok, ',')) throw std::invalid_argument("bad init row: " + line);
            vals[i] = std::stod(tok);
        }
        xs.push_back(vals[0]);
        rhos.push_back(vals[1]);
        ms.push_back(vals[2]);
    }
    if (xs.size() < 2) throw std::invalid_argument("initial-data file needs at least two rows");
    return [xs, rhos, ms](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return GasState{rhos.front(), ms.front()};
        if (it == xs.end()) return GasState{rhos.back(), ms.back()};
        const std::size_t i = it - xs.begin();
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return GasState{rhos[i - 1] + t * (rhos[i] - rhos[i - 1]),
                        ms[i - 1] + t * (ms[i] - ms[i - 1])};
    };
}

}  // namespace euler1d
