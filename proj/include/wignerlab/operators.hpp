#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

#include "wignerlab/potential.hpp"
#include "wignerlab/toeplitz.hpp"
#include "wignerlab/wigner_potential.hpp"

namespace wignerlab {

/// Offset velocity grid v_n = (2n+1) pi h, n = -N_v/2 .. N_v/2 - 1.
///
/// Nodes are stored in ascending order; storage index p corresponds to
/// n = p - N_v/2, and the mirror node -v_p sits at index N_v - 1 - p.
/// Zero is never a node.
struct VelocityMesh {
    int count = 0;
    double h = 0.0;
    double half_step = 0.0;  // pi h
    double dv = 0.0;         // 2 pi h
    double coherence_length = 0.0;  // R_h = 1 / (2h)
    std::vector<double> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
    std::size_t mirror(std::size_t p) const noexcept { return nodes.size() - 1 - p; }
    bool same_as(const VelocityMesh& other) const noexcept
    {
        return count == other.count && h == other.h;
    }
};

/// Throws ConfigError for odd or non-positive counts and non-positive h.
VelocityMesh build_velocity_mesh(int count, double h);

/// Convenience: h = 1 / (2 R_h).
VelocityMesh velocity_mesh_from_coherence(int count, double coherence_length);

/// Per-node data of the discrete pseudo-differential operator: the Toeplitz symbol
/// V_w(x, k dv), k = -(N_v-1)..N_v-1, and the shift a_m = V_w(x, -v_m).
class WignerKernel {
public:
    WignerKernel(double x, const VelocityMesh& mesh, std::vector<double> symbol,
                 std::vector<double> shift);

    double x() const noexcept { return x_; }
    std::size_t size() const noexcept { return shift_.size(); }
    int count() const noexcept { return count_; }
    double h() const noexcept { return h_; }

    /// V_w(x, k dv) for |k| < N_v.
    double symbol(long k) const { return symbol_.at(static_cast<std::size_t>(k + count_ - 1)); }
    std::span<const double> symbol_data() const noexcept { return symbol_; }
    std::span<const double> shift() const noexcept { return shift_; }

    /// M_{pq} = symbol(p - q) in storage indices.
    double entry(std::size_t p, std::size_t q) const
    {
        return symbol_[p + static_cast<std::size_t>(count_ - 1) - q];
    }

    bool is_zero() const noexcept { return zero_; }
    const ToeplitzMatvec& toeplitz() const noexcept { return toeplitz_; }

private:
    double x_;
    int count_;
    double h_;
    std::vector<double> symbol_;
    std::vector<double> shift_;
    ToeplitzMatvec toeplitz_;
    bool zero_;
};

/// Builds the kernel at x. Throws ConfigError when quad.cutoff() >= R_h (aliasing).
/// When `cache` is given the V_w samples are taken from it.
WignerKernel build_theta_kernel(const PotentialProfile& profile, double x,
                                const VelocityMesh& mesh, const QuadratureSpec& quad,
                                WignerPotentialCache* cache = nullptr);

/// Throws ConfigError naming both lengths unless cutoff < R_h.
void check_aliasing(const QuadratureSpec& quad, const VelocityMesh& mesh);

/// g = 2 pi h M f via circulant embedding.
std::vector<double> apply_theta(const WignerKernel& kernel, std::span<const double> f);

/// Same product with the explicit double loop.
std::vector<double> apply_theta_naive(const WignerKernel& kernel, std::span<const double> f);

/// (A_d f)_n = (Theta_d f)_n / v_n.
std::vector<double> apply_A(const WignerKernel& kernel, const VelocityMesh& mesh,
                            std::span<const double> f);

/// (B_d f)_n = (2 pi h / v_n) sum_m (M_nm - a_m) f_m.
std::vector<double> apply_B(const WignerKernel& kernel, const VelocityMesh& mesh,
                            std::span<const double> f);

enum class OperatorKind { theta, A, B };

/// Largest size for which dense materialization is permitted.
inline constexpr int kMaxDenseVelocity = 4096;

/// Dense M^{Theta_d}. Throws ResourceError above kMaxDenseVelocity.
Eigen::MatrixXd materialize_M(const WignerKernel& kernel);

/// Dense Theta_d, A_d or B_d.
Eigen::MatrixXd materialize_operator(const WignerKernel& kernel, const VelocityMesh& mesh,
                                     OperatorKind which);

/// Spectral norm of the dense operator at this node.
double operator_norm(const WignerKernel& kernel, const VelocityMesh& mesh, OperatorKind which);

/// Largest singular value by power iteration on O^T O.
///
/// Stops when successive estimates of sigma_max agree to `tolerance` (relative)
/// or after `max_iterations`; `converged` reports which.
struct PowerIterationResult {
    double sigma = 0.0;
    int iterations = 0;
    bool converged = false;
};
PowerIterationResult power_iteration_norm(const Eigen::MatrixXd& op, double tolerance = 1e-12,
                                          int max_iterations = 20000);

/// Largest singular value from the eigenvalues of O^T O.
double spectral_norm_dense(const Eigen::MatrixXd& op);

}  // namespace wignerlab
