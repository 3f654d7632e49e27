#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wignerlab/config.hpp"
#include "wignerlab/diagnostics.hpp"

namespace wignerlab {

struct RunOptions {
    Interpolation interpolation = Interpolation::prolong;
    SolveOptions solve;
    bool verbose = false;  // progress lines on stderr
};

/// One velocity slice f(x_i, .) of a solved scheme.
struct Slice {
    std::string location;  // "left", "center" or "x<value>"
    double x = 0.0;
    std::size_t node = 0;
    std::map<Scheme, std::vector<double>> values;
};

struct FigureResult {
    VelocityMesh velocity;
    std::vector<Slice> slices;
    std::map<Scheme, WignerSolution> solutions;
};

/// Solves the selected schemes on the single-mesh configuration and extracts slices at
/// cfg.slice_x (default: first interior node and device center).
FigureResult run_figure_comparison(const RunConfig& cfg, const RunOptions& options = {});

/// Writes slice_<loc>_<scheme>.csv, figure_<loc>.svg and figure_metadata.txt.
void write_figure_outputs(const FigureResult& result, const std::filesystem::path& out_dir);

/// Minimal two-axis line plot with one polyline per scheme.
std::string render_slice_svg(const Slice& slice, const VelocityMesh& velocity);

/// Velocity refinement: fixed N_x, levels (Nv_levels[k], Rh_levels[k]); the finest level of
/// each scheme is its reference. Both reports come from the same solves.
struct VelocitySweep {
    ExperimentReport convergence;
    ExperimentReport constraint;
};
VelocitySweep run_velocity_sweep(const RunConfig& cfg, const RunOptions& options = {});

ExperimentReport run_v_convergence(const RunConfig& cfg, const RunOptions& options = {});
ExperimentReport run_constraint_study(const RunConfig& cfg, const RunOptions& options = {});

/// Spatial refinement: fixed (N_v, R_h), levels Nx_levels; finest level is the reference.
ExperimentReport run_x_convergence(const RunConfig& cfg, const RunOptions& options = {});

/// Spectral norms of Theta_d, A_d, B_d at x = cfg.norm_x for every velocity level.
ExperimentReport run_norms(const RunConfig& cfg);

/// Solves the selected schemes on the single mesh of cfg.
std::map<Scheme, WignerSolution> run_solve(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace wignerlab
