#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wignerlab/bvp_solver.hpp"

namespace wignerlab {

/// f(v) = amplitude * exp(-(v - center)^2 / width); amplitude 0 means no inflow.
struct GaussianInflow {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    double operator()(double v) const;
};

enum class SchemeSelection { original, improved, both };

std::vector<Scheme> schemes_of(SchemeSelection selection);
SchemeSelection parse_scheme_selection(std::string_view text);

/// Parameters of one experiment run. Single-mesh fields are optional when the
/// corresponding level list is given and vice versa.
struct RunConfig {
    double device_length = 0.0;
    std::vector<Segment> segments;
    double potential_default = 0.0;
    EdgeRule edge_rule = EdgeRule::mean;

    std::optional<int> n_x;
    std::optional<int> n_v;
    std::optional<double> coherence_length;
    double ly = 0.0;
    double dy = 0.0;

    GaussianInflow inflow_left;
    GaussianInflow inflow_right;
    SchemeSelection scheme = SchemeSelection::both;

    std::vector<int> nx_levels;
    std::vector<int> nv_levels;
    std::vector<double> rh_levels;

    std::vector<double> slice_x;
    double norm_x = 10.0;

    PotentialProfile profile() const;
    QuadratureSpec quadrature() const;
    BoundaryConditions boundary() const;
};

/// Parses `key = value` lines (`#` starts a comment). Unknown keys, malformed
/// numbers and guard violations raise ConfigError with the offending line number.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace wignerlab
