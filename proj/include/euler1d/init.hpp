// Initial-data presets and data-file samplers.
#pragma once

#include <string>
#include <vector>

#include "euler1d/gas.hpp"

namespace euler1d {

std::vector<std::string> preset_names();

// Sampler for a named preset; gamma is needed where the construction
// depends on the pressure law (stationary-shock).  Throws
// std::invalid_argument for unknown names.
InitSampler make_preset(const std::string& name, double gamma);

// Sampler from a CSV file with header x,rho,m (piecewise-linear in x).
InitSampler load_init_file(const std::string& path);

}  // namespace euler1d
