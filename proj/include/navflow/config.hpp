#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navflow/estimators.hpp"

namespace navflow {

struct ExperimentConfig {
    SurfaceMode mode = SurfaceMode::Directed;
    int dimension = 2;
    Domain domain = Domain::box(2, 0.5, 0.5);
    IntensityField lambda = IntensityField::constant(1.0);
    IntensityField mu = IntensityField::constant(1.0);
    NavigationScheme scheme = NavigationScheme::dst();
    Point x;
    std::vector<Point> x_list;      // linkdensity locations
    std::vector<double> s_list;
    std::vector<double> rho_list;   // deadends range sweep
    int replicates = 2;
    double g_exponent = 0.6;
    double h_exponent = 0.55;
    double eps = 0.05;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    bool render = false;

    void validate() const;  // throws config_error with a diagnostic
};

// Flat `key = value` text with dotted keys; '#' starts a comment. Unknown keys
// and malformed values raise config_error with a file:line diagnostic.
// Relative grid-raster paths resolve against base_dir.
ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name,
                                   const std::string& base_dir = ".");

ExperimentConfig load_config(const std::string& path);

}  // namespace navflow
