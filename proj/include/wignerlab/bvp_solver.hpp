#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "wignerlab/operators.hpp"

namespace wignerlab {

/// Uniform nodes x_i = -l/2 + i dx, i = 0..N_x, dx = l / N_x.
struct SpatialMesh {
    double length = 0.0;
    int intervals = 0;
    double dx = 0.0;
    std::vector<double> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Throws ConfigError unless length > 0 and intervals >= 4.
SpatialMesh build_spatial_mesh(double length, int intervals);

/// Inflow data: `left` is imposed at x = -l/2 for v > 0, `right` at x = +l/2 for v < 0.
struct BoundaryConditions {
    std::function<double(double)> left;
    std::function<double(double)> right;
};

enum class Scheme { original, improved };

std::string_view to_string(Scheme scheme) noexcept;

/// Grid function f(x_i, v_p) stored x-major (velocity index fastest).
struct WignerSolution {
    SpatialMesh space;
    VelocityMesh velocity;
    Scheme scheme = Scheme::improved;
    std::vector<double> values;
    double residual = 0.0;  // ||A f - b|| / ||b|| of the accepted solve

    double at(std::size_t i, std::size_t p) const { return values[i * velocity.size() + p]; }
    std::span<const double> slice(std::size_t i) const
    {
        return std::span<const double>(values).subspan(i * velocity.size(), velocity.size());
    }
};

/// Kernels for every spatial node (index i matches SpatialMesh::nodes[i]).
using KernelSet = std::shared_ptr<const std::vector<WignerKernel>>;

KernelSet build_kernels(const PotentialProfile& profile, const SpatialMesh& space,
                        const VelocityMesh& velocity, const QuadratureSpec& quad,
                        WignerPotentialCache* cache = nullptr);

/// Global linear system of one scheme, block-banded with N_v x N_v blocks at
/// offsets -2..+2 around the diagonal.
///
/// Off-diagonal blocks are diagonal (the upwind stencil) and are kept as
/// coefficients; the diagonal block stencil - Op is materialized on demand by
/// block(). Unknowns are x-major with ascending velocity within a block.
class BlockSystem {
public:
    BlockSystem(SpatialMesh space, VelocityMesh velocity, KernelSet kernels, Scheme scheme,
                const BoundaryConditions& bc);

    const SpatialMesh& space() const noexcept { return space_; }
    const VelocityMesh& velocity() const noexcept { return velocity_; }
    Scheme scheme() const noexcept { return scheme_; }
    const std::vector<WignerKernel>& kernels() const noexcept { return *kernels_; }
    const KernelSet& kernel_set() const noexcept { return kernels_; }
    std::span<const double> rhs() const noexcept { return rhs_; }

    std::size_t block_size() const noexcept { return velocity_.size(); }
    std::size_t block_rows() const noexcept { return space_.size(); }
    std::size_t unknowns() const noexcept { return block_rows() * block_size(); }

    /// True for prescribed inflow rows (identity row, boundary value on the rhs).
    bool is_inflow(std::size_t i, std::size_t p) const;

    /// Upwind coefficient of row (i, p) on unknown (i + offset, p), offset in [-2, 2].
    double stencil(std::size_t i, int offset, std::size_t p) const;

    /// Dense block coupling block row i to block column i + offset.
    Eigen::MatrixXd block(std::size_t i, int offset) const;

    /// Op f at node i (A_d for the original scheme, B_d for the improved one).
    std::vector<double> apply_operator(std::size_t i, std::span<const double> f) const;

    /// y = A x without forming the matrix.
    std::vector<double> apply(std::span<const double> x) const;

    /// Solves the transport part only (operator dropped): one triangular sweep per velocity.
    std::vector<double> transport_solve(std::span<const double> r) const;

    /// Whole matrix; ResourceError above kMaxDenseUnknowns.
    Eigen::MatrixXd to_dense() const;

    static constexpr std::size_t kMaxDenseUnknowns = 8192;

private:
    SpatialMesh space_;
    VelocityMesh velocity_;
    KernelSet kernels_;
    Scheme scheme_;
    std::vector<double> rhs_;
};

BlockSystem assemble_system(const PotentialProfile& profile, const SpatialMesh& space,
                            const VelocityMesh& velocity, const QuadratureSpec& quad,
                            Scheme scheme, const BoundaryConditions& bc,
                            WignerPotentialCache* cache = nullptr);

struct SolveOptions {
    double tolerance = 1e-10;
    bool iterative_fallback = true;
    int restart = 60;
    int max_iterations = 3000;
};

/// ||A x - b|| / ||b|| (plain ||A x|| when b = 0).
double relative_residual(const BlockSystem& system, std::span<const double> x);

/// Block-banded elimination without inter-block pivoting (partial pivoting inside
/// each diagonal block). Throws SolverError with the failing block row if a pivot
/// block is numerically singular, or if the residual stays above tolerance after
/// the optional GMRES fallback.
WignerSolution solve(const BlockSystem& system, const SolveOptions& options = {});

/// Restarted GMRES, right-preconditioned by transport_solve.
WignerSolution solve_iterative(const BlockSystem& system, const SolveOptions& options = {},
                               std::span<const double> initial = {});

/// CSV with header `x,v,f`, 17 significant digits.
void write_solution_csv(std::ostream& os, const WignerSolution& solution);

}  // namespace wignerlab
