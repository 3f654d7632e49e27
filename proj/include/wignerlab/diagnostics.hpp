#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wignerlab/bvp_solver.hpp"

namespace wignerlab {

/// How two solutions on different velocity meshes are brought onto a common grid.
///  prolong: the coarse solution is carried to the reference nodes, linearly within
///           v > 0 and v < 0 separately (never across the jump at v = 0).
///  sinc:    the reference is restricted to the coarse nodes by its band-limited series.
///  linear:  the reference is restricted to the coarse nodes piecewise-linearly.
enum class Interpolation { prolong, sinc, linear };

std::string to_string(Interpolation method);
Interpolation parse_interpolation(const std::string& name);

/// Values of `ref` at the velocity nodes of `target` (per spatial node of `ref`).
/// Sinc-series (band-limited) interpolation on the offset lattice, or piecewise-linear
/// with zero extension outside the reference nodes.
Eigen::MatrixXd velocity_interpolation_matrix(const VelocityMesh& ref, const VelocityMesh& target,
                                              Interpolation method);

/// Rows: nodes of `fine`; columns: nodes of `coarse`. Piecewise-linear on each half-line,
/// extrapolating linearly past the outermost coarse node and towards v = 0.
Eigen::MatrixXd velocity_prolongation_matrix(const VelocityMesh& coarse, const VelocityMesh& fine);

/// Weighted discrete L2 distance sqrt(sum_i w_i sum_n |f - f_ref|^2 dv) at the spatial
/// nodes of `sol`, with trapezoid weights w_i (dx/2 at the two contacts). The velocity
/// sum runs over sol's nodes (sinc, linear) or ref's nodes (prolong).
/// `ref` must cover the same device with a spatial grid nested in (or equal to) sol's
/// and at least as many velocity nodes. Throws ContractError otherwise.
double l2_error(const WignerSolution& sol, const WignerSolution& ref,
                Interpolation method = Interpolation::prolong);

/// order_k = log2(e_k / e_{k+1}); undefined (nullopt) where an error is zero.
std::vector<std::optional<double>> convergence_order(const std::vector<double>& errors);

/// Least-squares slope of -log2(error) against log2(level); nullopt when fewer than
/// two positive errors are available.
std::optional<double> aggregate_order(const std::vector<double>& levels,
                                      const std::vector<double>& errors);

/// max_i | sum_n f(x_i, v_n) V_w(x_i, v_n) dv | using the kernel samples V_w(x_i, v_n) = -a_n.
double constraint_residual(const WignerSolution& sol, const std::vector<WignerKernel>& kernels);

struct ReportRow {
    double level = 0.0;
    double error = 0.0;
    std::optional<double> order;
    std::string scheme;
};

struct NormRow {
    double coherence_length = 0.0;
    int velocity_count = 0;
    double x = 0.0;
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Result of a refinement study.
struct ExperimentReport {
    std::string axis;       // "velocity", "space", "constraint", "norms"
    std::string quantity;   // what the error column holds
    std::vector<ReportRow> rows;
    std::vector<NormRow> norms;
    std::vector<std::pair<std::string, std::string>> metadata;

    std::vector<ReportRow> rows_for(const std::string& scheme) const;
    std::optional<double> aggregate(const std::string& scheme) const;
};

/// Rows `level,error,order,scheme` (order left empty when undefined).
void write_report_csv(std::ostream& os, const ExperimentReport& report);

/// Human-readable table, one block per scheme, followed by aggregate slopes.
void print_report(std::ostream& os, const ExperimentReport& report);

void write_norms_csv(std::ostream& os, const ExperimentReport& report);

}  // namespace wignerlab
