#include "wignerlab/bvp_solver.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

SpatialMesh build_spatial_mesh(double length, int intervals)
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("device_length must be positive");
    }
    if (intervals < 4) {
        std::ostringstream os;
        os << "N_x must be >= 4 for the second-order upwind stencil (got " << intervals << ")";
        throw ConfigError(os.str());
    }
    SpatialMesh mesh;
    mesh.length = length;
    mesh.intervals = intervals;
    mesh.dx = length / intervals;
    mesh.nodes.resize(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) mesh.nodes[i] = -0.5 * length + i * mesh.dx;
    return mesh;
}

std::string_view to_string(Scheme scheme) noexcept
{
    return scheme == Scheme::original ? "original" : "improved";
}

KernelSet build_kernels(const PotentialProfile& profile, const SpatialMesh& space,
                        const VelocityMesh& velocity, const QuadratureSpec& quad,
                        WignerPotentialCache* cache)
{
    check_aliasing(quad, velocity);
    auto kernels = std::make_shared<std::vector<WignerKernel>>();
    kernels->reserve(space.size());
    for (double x : space.nodes) {
        kernels->push_back(build_theta_kernel(profile, x, velocity, quad, cache));
    }
    return kernels;
}

BlockSystem::BlockSystem(SpatialMesh space, VelocityMesh velocity, KernelSet kernels,
                         Scheme scheme, const BoundaryConditions& bc)
    : space_(std::move(space)), velocity_(std::move(velocity)), kernels_(std::move(kernels)),
      scheme_(scheme)
{
    if (space_.intervals < 4) throw ConfigError("N_x must be >= 4");
    if (!kernels_ || kernels_->size() != space_.size()) {
        throw ContractError("BlockSystem: need one kernel per spatial node");
    }
    for (const auto& k : *kernels_) {
        if (k.count() != velocity_.count || k.h() != velocity_.h) {
            throw ContractError("BlockSystem: kernel built on a different velocity mesh");
        }
    }
    if (!bc.left || !bc.right) throw ContractError("BlockSystem: boundary functions must be set");

    const std::size_t n = block_size();
    rhs_.assign(unknowns(), 0.0);
    const std::size_t last = block_rows() - 1;
    for (std::size_t p = 0; p < n; ++p) {
        const double v = velocity_.nodes[p];
        const double value = v > 0.0 ? bc.left(v) : bc.right(v);
        if (!std::isfinite(value)) {
            throw ConfigError("inflow boundary data is not finite on the velocity mesh");
        }
        if (v > 0.0) {
            rhs_[p] = value;
        } else {
            rhs_[last * n + p] = value;
        }
    }
}

bool BlockSystem::is_inflow(std::size_t i, std::size_t p) const
{
    const bool positive = velocity_.nodes[p] > 0.0;
    return positive ? i == 0 : i == block_rows() - 1;
}

double BlockSystem::stencil(std::size_t i, int offset, std::size_t p) const
{
    if (is_inflow(i, p)) return offset == 0 ? 1.0 : 0.0;
    const double dx = space_.dx;
    const std::size_t last = block_rows() - 1;
    if (velocity_.nodes[p] > 0.0) {
        if (i == 1) {
            // First-order upwind next to the inflow boundary.
            switch (offset) {
                case 0: return 1.0 / dx;
                case -1: return -1.0 / dx;
                default: return 0.0;
            }
        }
        switch (offset) {
            case 0: return 3.0 / (2.0 * dx);
            case -1: return -4.0 / (2.0 * dx);
            case -2: return 1.0 / (2.0 * dx);
            default: return 0.0;
        }
    }
    if (i == last - 1) {
        switch (offset) {
            case 0: return -1.0 / dx;
            case 1: return 1.0 / dx;
            default: return 0.0;
        }
    }
    switch (offset) {
        case 0: return -3.0 / (2.0 * dx);
        case 1: return 4.0 / (2.0 * dx);
        case 2: return -1.0 / (2.0 * dx);
        default: return 0.0;
    }
}

std::vector<double> BlockSystem::apply_operator(std::size_t i, std::span<const double> f) const
{
    const auto& kernel = (*kernels_)[i];
    return scheme_ == Scheme::original ? apply_A(kernel, velocity_, f)
                                       : apply_B(kernel, velocity_, f);
}

Eigen::MatrixXd BlockSystem::block(std::size_t i, int offset) const
{
    const auto n = static_cast<Eigen::Index>(block_size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    const long j = static_cast<long>(i) + offset;
    if (offset < -2 || offset > 2 || j < 0 || j >= static_cast<long>(block_rows())) return b;
    if (offset == 0) {
        const auto& kernel = (*kernels_)[i];
        if (!kernel.is_zero()) {
            b = -materialize_operator(kernel, velocity_,
                                      scheme_ == Scheme::original ? OperatorKind::A
                                                                  : OperatorKind::B);
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            if (is_inflow(i, p)) b.row(p).setZero();
        }
    }
    for (Eigen::Index p = 0; p < n; ++p) b(p, p) += stencil(i, offset, p);
    return b;
}

std::vector<double> BlockSystem::apply(std::span<const double> x) const
{
    if (x.size() != unknowns()) throw ContractError("BlockSystem::apply: wrong vector length");
    const std::size_t n = block_size();
    const std::size_t rows = block_rows();
    std::vector<double> y(unknowns(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto xi = x.subspan(i * n, n);
        std::vector<double> op(n, 0.0);
        if (!(*kernels_)[i].is_zero()) op = apply_operator(i, xi);
        for (std::size_t p = 0; p < n; ++p) {
            double acc = 0.0;
            for (int off = -2; off <= 2; ++off) {
                const long j = static_cast<long>(i) + off;
                if (j < 0 || j >= static_cast<long>(rows)) continue;
                const double c = stencil(i, off, p);
                if (c != 0.0) acc += c * x[static_cast<std::size_t>(j) * n + p];
            }
            if (!is_inflow(i, p)) acc -= op[p];
            y[i * n + p] = acc;
        }
    }
    return y;
}

std::vector<double> BlockSystem::transport_solve(std::span<const double> r) const
{
    if (r.size() != unknowns()) throw ContractError("transport_solve: wrong vector length");
    const std::size_t n = block_size();
    const long rows = static_cast<long>(block_rows());
    std::vector<double> f(unknowns(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const bool positive = velocity_.nodes[p] > 0.0;
        const int dir = positive ? -1 : 1;  // upstream direction
        for (long step = 0; step < rows; ++step) {
            const long i = positive ? step : rows - 1 - step;
            double acc = r[static_cast<std::size_t>(i) * n + p];
            for (int k = 1; k <= 2; ++k) {
                const long j = i + dir * k;
                if (j < 0 || j >= rows) continue;
                acc -= stencil(static_cast<std::size_t>(i), dir * k, p) *
                       f[static_cast<std::size_t>(j) * n + p];
            }
            f[static_cast<std::size_t>(i) * n + p] = acc / stencil(static_cast<std::size_t>(i), 0, p);
        }
    }
    return f;
}

Eigen::MatrixXd BlockSystem::to_dense() const
{
    if (unknowns() > kMaxDenseUnknowns) {
        std::ostringstream os;
        os << "dense system of " << unknowns() << " unknowns exceeds the limit " << kMaxDenseUnknowns;
        throw ResourceError(os.str());
    }
    const auto n = static_cast<Eigen::Index>(block_size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(unknowns(), unknowns());
    for (std::size_t i = 0; i < block_rows(); ++i) {
        for (int off = -2; off <= 2; ++off) {
            const long j = static_cast<long>(i) + off;
            if (j < 0 || j >= static_cast<long>(block_rows())) continue;
            a.block(static_cast<Eigen::Index>(i) * n, j * n, n, n) = block(i, off);
        }
    }
    return a;
}

BlockSystem assemble_system(const PotentialProfile& profile, const SpatialMesh& space,
                            const VelocityMesh& velocity, const QuadratureSpec& quad,
                            Scheme scheme, const BoundaryConditions& bc,
                            WignerPotentialCache* cache)
{
    return BlockSystem(space, velocity, build_kernels(profile, space, velocity, quad, cache),
                       scheme, bc);
}

double relative_residual(const BlockSystem& system, std::span<const double> x)
{
    const auto ax = system.apply(x);
    const auto b = system.rhs();
    double rr = 0.0;
    double bb = 0.0;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        rr += (ax[k] - b[k]) * (ax[k] - b[k]);
        bb += b[k] * b[k];
    }
    return bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_vector(std::span<const double> s)
{
    return Eigen::Map<const VectorXd>(s.data(), static_cast<Index>(s.size()));
}

struct EliminatedRow {
    MatrixXd w1;                 // P^{-1} A_{k,k+1}
    MatrixXd w2;                 // P^{-1} A_{k,k+2}, restricted to `w2_cols`
    std::vector<Index> w2_cols;  // columns where the +2 stencil is nonzero
    VectorXd y;                  // P^{-1} b_k
};

std::vector<double> direct_solve(const BlockSystem& sys)
{
    const Index n = static_cast<Index>(sys.block_size());
    const std::size_t rows = sys.block_rows();
    const auto rhs = sys.rhs();
    auto rhs_block = [&](std::size_t i) { return to_vector(rhs.subspan(i * n, n)); };
    auto diag_of = [&](std::size_t i, int off) {
        VectorXd d(n);
        for (Index p = 0; p < n; ++p) d[p] = sys.stencil(i, off, p);
        return d;
    };

    std::vector<EliminatedRow> elim(rows);

    // Rolling state: current pivot row k and the next row k + 1.
    MatrixXd pivot = sys.block(0, 0);
    MatrixXd upper = rows > 1 ? sys.block(0, 1) : MatrixXd();
    VectorXd b = rhs_block(0);
    MatrixXd next_lower, next_diag, next_upper;
    VectorXd next_b;
    if (rows > 1) {
        next_lower = sys.block(1, -1);
        next_diag = sys.block(1, 0);
        next_upper = rows > 2 ? sys.block(1, 1) : MatrixXd();
        next_b = rhs_block(1);
    }

    for (std::size_t k = 0; k < rows; ++k) {
        Eigen::PartialPivLU<MatrixXd> lu(pivot);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-14)) {
            const auto diag = lu.matrixLU().diagonal().cwiseAbs();
            Index where = 0;
            diag.minCoeff(&where);
            std::ostringstream os;
            os << "singular pivot block at spatial node " << k << " (rcond " << rcond
               << ", smallest pivot at local index " << where << ")";
            throw SolverError(os.str(), static_cast<long>(k), static_cast<long>(where));
        }
        auto& row = elim[k];
        row.y = lu.solve(b);
        if (k + 1 < rows) row.w1 = lu.solve(upper);
        if (k + 2 < rows) {
            const VectorXd d2 = diag_of(k, 2);
            for (Index p = 0; p < n; ++p) {
                if (d2[p] != 0.0) row.w2_cols.push_back(p);
            }
            MatrixXd r2 = MatrixXd::Zero(n, static_cast<Index>(row.w2_cols.size()));
            for (Index c = 0; c < r2.cols(); ++c) r2(row.w2_cols[c], c) = d2[row.w2_cols[c]];
            row.w2 = lu.solve(r2);
        }
        if (k + 1 >= rows) break;

        // Row k + 1: subtract its (modified) lower block times the eliminated row.
        next_diag.noalias() -= next_lower * row.w1;
        next_b.noalias() -= next_lower * row.y;
        if (k + 2 < rows) {
            const MatrixXd update = next_lower * row.w2;
            for (Index c = 0; c < update.cols(); ++c) next_upper.col(row.w2_cols[c]) -= update.col(c);
        }

        // Row k + 2: its -2 block is the untouched diagonal upwind coefficient.
        MatrixXd after_lower, after_diag, after_upper;
        VectorXd after_b;
        if (k + 2 < rows) {
            const std::size_t r = k + 2;
            const VectorXd d = diag_of(r, -2);
            after_lower = sys.block(r, -1);
            after_lower.noalias() -= d.asDiagonal() * row.w1;
            after_diag = sys.block(r, 0);
            const MatrixXd scaled = d.asDiagonal() * row.w2;
            for (Index c = 0; c < scaled.cols(); ++c) after_diag.col(row.w2_cols[c]) -= scaled.col(c);
            after_b = rhs_block(r) - d.asDiagonal() * row.y;
            if (r + 1 < rows) after_upper = sys.block(r, 1);
        }

        pivot = std::move(next_diag);
        upper = std::move(next_upper);
        b = std::move(next_b);
        next_lower = std::move(after_lower);
        next_diag = std::move(after_diag);
        next_upper = std::move(after_upper);
        next_b = std::move(after_b);
    }

    std::vector<double> x(sys.unknowns(), 0.0);
    for (std::size_t kk = rows; kk-- > 0;) {
        const auto& row = elim[kk];
        VectorXd xk = row.y;
        if (kk + 1 < rows) {
            xk.noalias() -= row.w1 * Eigen::Map<const VectorXd>(&x[(kk + 1) * n], n);
        }
        if (kk + 2 < rows && !row.w2_cols.empty()) {
            VectorXd sub(static_cast<Index>(row.w2_cols.size()));
            for (Index c = 0; c < sub.size(); ++c) sub[c] = x[(kk + 2) * n + row.w2_cols[c]];
            xk.noalias() -= row.w2 * sub;
        }
        std::copy(xk.data(), xk.data() + n, x.begin() + static_cast<long>(kk * n));
    }
    return x;
}

WignerSolution make_solution(const BlockSystem& sys, std::vector<double> values, double residual)
{
    WignerSolution s;
    s.space = sys.space();
    s.velocity = sys.velocity();
    s.scheme = sys.scheme();
    s.values = std::move(values);
    s.residual = residual;
    return s;
}

bool all_finite(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

}  // namespace

WignerSolution solve(const BlockSystem& system, const SolveOptions& options)
{
    auto x = direct_solve(system);
    const double residual = all_finite(x) ? relative_residual(system, x) : INFINITY;
    if (residual <= options.tolerance) return make_solution(system, std::move(x), residual);
    if (options.iterative_fallback) {
        if (!all_finite(x)) x.assign(x.size(), 0.0);
        return solve_iterative(system, options, x);
    }
    std::ostringstream os;
    os << "direct solve residual " << residual << " exceeds tolerance " << options.tolerance;
    throw SolverError(os.str());
}

WignerSolution solve_iterative(const BlockSystem& system, const SolveOptions& options,
                               std::span<const double> initial)
{
    const std::size_t size = system.unknowns();
    std::vector<double> x(size, 0.0);
    if (!initial.empty()) {
        if (initial.size() != size) throw ContractError("solve_iterative: bad initial guess length");
        std::copy(initial.begin(), initial.end(), x.begin());
    }
    const auto b = system.rhs();
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    const double target = options.tolerance * (bnorm > 0.0 ? bnorm : 1.0);
    const int m = std::max(1, options.restart);

    auto residual_vector = [&](const std::vector<double>& xv) {
        auto ax = system.apply(xv);
        VectorXd r(static_cast<Index>(size));
        for (std::size_t k = 0; k < size; ++k) r[k] = b[k] - ax[k];
        return r;
    };

    int total = 0;
    VectorXd r = residual_vector(x);
    double beta = r.norm();
    while (beta > target && total < options.max_iterations) {
        MatrixXd basis(static_cast<Index>(size), m + 1);
        MatrixXd hess = MatrixXd::Zero(m + 1, m);
        VectorXd g = VectorXd::Zero(m + 1);
        std::vector<double> cs(m), sn(m);
        basis.col(0) = r / beta;
        g[0] = beta;
        int j = 0;
        for (; j < m && total < options.max_iterations; ++j, ++total) {
            const auto z = system.transport_solve(
                std::span<const double>(basis.col(j).data(), size));
            const auto az = system.apply(z);
            VectorXd w = Eigen::Map<const VectorXd>(az.data(), static_cast<Index>(size));
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = basis.col(i).dot(w);
                w -= hess(i, j) * basis.col(i);
            }
            hess(j + 1, j) = w.norm();
            if (hess(j + 1, j) > 0.0) basis.col(j + 1) = w / hess(j + 1, j);
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = t;
            }
            const double denom = std::hypot(hess(j, j), hess(j + 1, j));
            cs[j] = denom > 0.0 ? hess(j, j) / denom : 1.0;
            sn[j] = denom > 0.0 ? hess(j + 1, j) / denom : 0.0;
            hess(j, j) = denom;
            hess(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            if (std::abs(g[j + 1]) <= target || hess(j, j) == 0.0) {
                ++j;
                ++total;
                break;
            }
        }
        const VectorXd coeffs =
            hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        const VectorXd update = basis.leftCols(j) * coeffs;
        const auto dx = system.transport_solve(std::span<const double>(update.data(), size));
        for (std::size_t k = 0; k < size; ++k) x[k] += dx[k];
        r = residual_vector(x);
        beta = r.norm();
    }

    const double residual = relative_residual(system, x);
    if (!(residual <= options.tolerance)) {
        std::ostringstream os;
        os << "GMRES stopped after " << total << " iterations with relative residual " << residual;
        throw SolverError(os.str());
    }
    return make_solution(system, std::move(x), residual);
}

void write_solution_csv(std::ostream& os, const WignerSolution& solution)
{
    os << "x,v,f\n";
    char line[96];
    const std::size_t n = solution.velocity.size();
    for (std::size_t i = 0; i < solution.space.size(); ++i) {
        for (std::size_t p = 0; p < n; ++p) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", solution.space.nodes[i],
                          solution.velocity.nodes[p], solution.at(i, p));
            os << line;
        }
    }
}

}  // namespace wignerlab
