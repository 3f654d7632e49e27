#include "wignerlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

VelocityMesh build_velocity_mesh(int count, double h)
{
    if (count < 2 || count % 2 != 0) {
        std::ostringstream os;
        os << "N_v must be even and >= 2 (got " << count << ")";
        throw ConfigError(os.str());
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigError("velocity mesh parameter h must be positive");
    }
    VelocityMesh mesh;
    mesh.count = count;
    mesh.h = h;
    mesh.half_step = std::numbers::pi * h;
    mesh.dv = 2.0 * mesh.half_step;
    mesh.coherence_length = 1.0 / (2.0 * h);
    mesh.nodes.resize(static_cast<std::size_t>(count));
    const int half = count / 2;
    for (int p = 0; p < count; ++p) {
        const int n = p - half;
        mesh.nodes[p] = static_cast<double>(2 * n + 1) * mesh.half_step;
    }
    return mesh;
}

VelocityMesh velocity_mesh_from_coherence(int count, double coherence_length)
{
    if (!(coherence_length > 0.0)) throw ConfigError("R_h must be positive");
    return build_velocity_mesh(count, 1.0 / (2.0 * coherence_length));
}

WignerKernel::WignerKernel(double x, const VelocityMesh& mesh, std::vector<double> symbol,
                           std::vector<double> shift)
    : x_(x), count_(mesh.count), h_(mesh.h), symbol_(std::move(symbol)), shift_(std::move(shift))
{
    if (symbol_.size() != 2 * static_cast<std::size_t>(count_) - 1 ||
        shift_.size() != static_cast<std::size_t>(count_)) {
        throw ContractError("WignerKernel: symbol/shift sizes do not match the velocity mesh");
    }
    zero_ = std::all_of(symbol_.begin(), symbol_.end(), [](double s) { return s == 0.0; }) &&
            std::all_of(shift_.begin(), shift_.end(), [](double s) { return s == 0.0; });
    toeplitz_ = ToeplitzMatvec(symbol_);
}

void check_aliasing(const QuadratureSpec& quad, const VelocityMesh& mesh)
{
    if (!(quad.cutoff() < mesh.coherence_length)) {
        std::ostringstream os;
        os << "aliasing guard violated: Ly = " << quad.cutoff()
           << " must be smaller than R_h = " << mesh.coherence_length;
        throw ConfigError(os.str());
    }
}

WignerKernel build_theta_kernel(const PotentialProfile& profile, double x,
                                const VelocityMesh& mesh, const QuadratureSpec& quad,
                                WignerPotentialCache* cache)
{
    check_aliasing(quad, mesh);
    const int n = mesh.count;

    // Both the symbol (k dv = 2k * pi h) and the shift (-v_m = -(2m+1) pi h) live on
    // the half-step lattice j * pi h with |j| <= 2n - 2.
    const int lattice = 2 * n - 2;
    std::shared_ptr<const std::vector<double>> samples;
    if (cache != nullptr) {
        samples = cache->samples(x, quad, mesh.half_step, lattice);
    } else {
        auto col = std::make_shared<std::vector<double>>(static_cast<std::size_t>(lattice) + 1);
        for (int j = 0; j <= lattice; ++j) {
            (*col)[j] = wigner_potential(profile, x, static_cast<double>(j) * mesh.half_step, quad);
        }
        samples = col;
    }
    const auto& s = *samples;

    std::vector<double> symbol(2 * static_cast<std::size_t>(n) - 1);
    symbol[n - 1] = s[0];
    for (int k = 1; k < n; ++k) {
        symbol[n - 1 + k] = s[2 * k];
        symbol[n - 1 - k] = -s[2 * k];
    }

    std::vector<double> shift(static_cast<std::size_t>(n));
    const int half = n / 2;
    for (int p = 0; p < n; ++p) {
        const int m = p - half;
        const int j = -(2 * m + 1);  // lattice index of -v_m
        shift[p] = j >= 0 ? s[j] : -s[-j];
    }
    return WignerKernel(x, mesh, std::move(symbol), std::move(shift));
}

namespace {

void require_length(const WignerKernel& kernel, std::span<const double> f)
{
    if (f.size() != kernel.size()) {
        std::ostringstream os;
        os << "velocity vector has length " << f.size() << ", kernel expects " << kernel.size();
        throw ContractError(os.str());
    }
}

void require_mesh(const WignerKernel& kernel, const VelocityMesh& mesh)
{
    if (kernel.count() != mesh.count || kernel.h() != mesh.h) {
        throw ContractError("kernel was built on a different velocity mesh");
    }
}

void require_dense(std::size_t n)
{
    if (n > static_cast<std::size_t>(kMaxDenseVelocity)) {
        std::ostringstream os;
        os << "dense materialization of N_v = " << n << " exceeds the limit " << kMaxDenseVelocity;
        throw ResourceError(os.str());
    }
}

double theta_scale(const WignerKernel& kernel) { return 2.0 * std::numbers::pi * kernel.h(); }

}  // namespace

std::vector<double> apply_theta(const WignerKernel& kernel, std::span<const double> f)
{
    require_length(kernel, f);
    std::vector<double> g(kernel.size(), 0.0);
    if (kernel.is_zero()) return g;
    kernel.toeplitz().apply(f, g);
    const double scale = theta_scale(kernel);
    for (auto& gi : g) gi *= scale;
    return g;
}

std::vector<double> apply_theta_naive(const WignerKernel& kernel, std::span<const double> f)
{
    require_length(kernel, f);
    const std::size_t n = kernel.size();
    const double scale = theta_scale(kernel);
    std::vector<double> g(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        double acc = 0.0;
        for (std::size_t q = 0; q < n; ++q) acc += kernel.entry(p, q) * f[q];
        g[p] = scale * acc;
    }
    return g;
}

std::vector<double> apply_A(const WignerKernel& kernel, const VelocityMesh& mesh,
                            std::span<const double> f)
{
    require_mesh(kernel, mesh);
    auto g = apply_theta(kernel, f);
    for (std::size_t p = 0; p < g.size(); ++p) g[p] /= mesh.nodes[p];
    return g;
}

std::vector<double> apply_B(const WignerKernel& kernel, const VelocityMesh& mesh,
                            std::span<const double> f)
{
    require_mesh(kernel, mesh);
    auto g = apply_theta(kernel, f);
    const auto a = kernel.shift();
    double moment = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) moment += a[m] * f[m];
    const double correction = theta_scale(kernel) * moment;
    for (std::size_t p = 0; p < g.size(); ++p) g[p] = (g[p] - correction) / mesh.nodes[p];
    return g;
}

Eigen::MatrixXd materialize_M(const WignerKernel& kernel)
{
    const std::size_t n = kernel.size();
    require_dense(n);
    Eigen::MatrixXd m(n, n);
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t p = 0; p < n; ++p) m(p, q) = kernel.entry(p, q);
    }
    return m;
}

Eigen::MatrixXd materialize_operator(const WignerKernel& kernel, const VelocityMesh& mesh,
                                     OperatorKind which)
{
    require_mesh(kernel, mesh);
    Eigen::MatrixXd m = materialize_M(kernel);
    const double scale = theta_scale(kernel);
    const auto n = static_cast<Eigen::Index>(kernel.size());
    if (which == OperatorKind::B) {
        const auto a = kernel.shift();
        for (Eigen::Index q = 0; q < n; ++q) m.col(q).array() -= a[q];
    }
    m *= scale;
    if (which != OperatorKind::theta) {
        for (Eigen::Index p = 0; p < n; ++p) m.row(p) /= mesh.nodes[p];
    }
    return m;
}

double operator_norm(const WignerKernel& kernel, const VelocityMesh& mesh, OperatorKind which)
{
    if (kernel.is_zero()) return 0.0;
    return spectral_norm_dense(materialize_operator(kernel, mesh, which));
}

PowerIterationResult power_iteration_norm(const Eigen::MatrixXd& op, double tolerance,
                                          int max_iterations)
{
    PowerIterationResult result;
    if (op.size() == 0) return result;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd x(op.cols());
    for (auto& xi : x) xi = dist(rng);
    x.normalize();

    double previous = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd y = op.transpose() * (op * x);
        const double lambda = y.norm();  // Rayleigh-type estimate of sigma^2 with |x| = 1
        result.iterations = it;
        if (lambda == 0.0) {
            result.sigma = 0.0;
            result.converged = true;
            return result;
        }
        result.sigma = std::sqrt(lambda);
        x = y / lambda;
        if (it > 1 && std::abs(result.sigma - previous) <= tolerance * result.sigma) {
            result.converged = true;
            return result;
        }
        previous = result.sigma;
    }
    return result;
}

double spectral_norm_dense(const Eigen::MatrixXd& op)
{
    if (op.size() == 0) return 0.0;
    const Eigen::MatrixXd gram = op.transpose() * op;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    return top > 0.0 ? std::sqrt(top) : 0.0;
}

}  // namespace wignerlab
