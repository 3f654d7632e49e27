#include "wignerlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

}  // namespace

std::string to_string(Interpolation method)
{
    switch (method) {
    case Interpolation::prolong: return "prolong";
    case Interpolation::sinc: return "sinc";
    case Interpolation::linear: return "linear";
    }
    return "?";
}

Interpolation parse_interpolation(const std::string& name)
{
    if (name == "prolong") return Interpolation::prolong;
    if (name == "sinc") return Interpolation::sinc;
    if (name == "linear") return Interpolation::linear;
    throw ConfigError("unknown interpolation '" + name + "' (expected prolong, sinc or linear)");
}

Eigen::MatrixXd velocity_interpolation_matrix(const VelocityMesh& ref, const VelocityMesh& target,
                                              Interpolation method)
{
    const auto nt = static_cast<Eigen::Index>(target.size());
    const auto nr = static_cast<Eigen::Index>(ref.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nt, nr);
    if (method == Interpolation::sinc) {
        const double scale = 1.0 / (2.0 * ref.h);
        for (Eigen::Index p = 0; p < nt; ++p) {
            for (Eigen::Index q = 0; q < nr; ++q) {
                w(p, q) = sinc((target.nodes[p] - ref.nodes[q]) * scale);
            }
        }
        return w;
    }
    for (Eigen::Index p = 0; p < nt; ++p) {
        const double v = target.nodes[p];
        if (v < ref.nodes.front() || v > ref.nodes.back()) continue;
        auto it = std::upper_bound(ref.nodes.begin(), ref.nodes.end(), v);
        const auto hi = std::min<Eigen::Index>(it - ref.nodes.begin(), nr - 1);
        const auto lo = hi - 1;
        const double t = (v - ref.nodes[lo]) / (ref.nodes[hi] - ref.nodes[lo]);
        w(p, lo) = 1.0 - t;
        w(p, hi) = t;
    }
    return w;
}

Eigen::MatrixXd velocity_prolongation_matrix(const VelocityMesh& coarse, const VelocityMesh& fine)
{
    const auto nc = static_cast<Eigen::Index>(coarse.size());
    const auto nf = static_cast<Eigen::Index>(fine.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nf, nc);
    // Negative half-line holds coarse nodes [0, half), positive [half, nc).
    const Eigen::Index half = nc / 2;
    for (Eigen::Index p = 0; p < nf; ++p) {
        const double v = fine.nodes[p];
        const Eigen::Index first = v < 0.0 ? 0 : half;
        const Eigen::Index last = v < 0.0 ? half - 1 : nc - 1;
        if (first == last) {
            w(p, first) = 1.0;
            continue;
        }
        auto begin = coarse.nodes.begin() + first;
        auto end = coarse.nodes.begin() + last + 1;
        Eigen::Index hi = std::upper_bound(begin, end, v) - coarse.nodes.begin();
        hi = std::clamp<Eigen::Index>(hi, first + 1, last);
        const Eigen::Index lo = hi - 1;
        const double t = (v - coarse.nodes[lo]) / (coarse.nodes[hi] - coarse.nodes[lo]);
        w(p, lo) = 1.0 - t;
        w(p, hi) = t;
    }
    return w;
}

double l2_error(const WignerSolution& sol, const WignerSolution& ref, Interpolation method)
{
    if (sol.space.length != ref.space.length) {
        throw ContractError("l2_error: solutions live on different device intervals");
    }
    if (ref.space.intervals < sol.space.intervals || ref.space.intervals % sol.space.intervals != 0) {
        throw ContractError("l2_error: reference spatial grid is not a refinement of the solution grid");
    }
    if (ref.velocity.size() < sol.velocity.size()) {
        throw ContractError("l2_error: reference velocity grid is coarser than the solution grid");
    }
    const std::size_t stride = static_cast<std::size_t>(ref.space.intervals / sol.space.intervals);
    const bool same_velocity = sol.velocity.same_as(ref.velocity);
    const bool on_ref = method == Interpolation::prolong && !same_velocity;
    const auto& grid = on_ref ? ref.velocity : sol.velocity;
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd w;
    if (!same_velocity) {
        w = on_ref ? velocity_prolongation_matrix(sol.velocity, ref.velocity)
                   : velocity_interpolation_matrix(ref.velocity, sol.velocity, method);
    }

    const std::size_t nx = sol.space.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const auto fs = sol.slice(i);
        const auto fr = ref.slice(i * stride);
        Eigen::Map<const Eigen::VectorXd> vs(fs.data(), static_cast<Eigen::Index>(fs.size()));
        Eigen::Map<const Eigen::VectorXd> vr(fr.data(), static_cast<Eigen::Index>(fr.size()));
        Eigen::VectorXd d;
        if (same_velocity) {
            d = vs - vr;
        } else if (on_ref) {
            d = w * vs - vr;
        } else {
            d = vs - w * vr;
        }
        const double weight = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
        sum += weight * d.head(n).squaredNorm();
    }
    return std::sqrt(sum * sol.space.dx * grid.dv);
}

std::vector<std::optional<double>> convergence_order(const std::vector<double>& errors)
{
    std::vector<std::optional<double>> orders;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (errors[k] > 0.0 && errors[k + 1] > 0.0) {
            orders.emplace_back(std::log2(errors[k] / errors[k + 1]));
        } else {
            orders.emplace_back(std::nullopt);
        }
    }
    return orders;
}

std::optional<double> aggregate_order(const std::vector<double>& levels,
                                      const std::vector<double>& errors)
{
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < std::min(levels.size(), errors.size()); ++k) {
        if (errors[k] > 0.0 && levels[k] > 0.0) {
            xs.push_back(std::log2(levels[k]));
            ys.push_back(std::log2(errors[k]));
        }
    }
    if (xs.size() < 2) return std::nullopt;
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return -sxy / sxx;
}

double constraint_residual(const WignerSolution& sol, const std::vector<WignerKernel>& kernels)
{
    if (kernels.size() != sol.space.size()) {
        throw ContractError("constraint_residual: need one kernel per spatial node");
    }
    const std::size_t n = sol.velocity.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const auto& k = kernels[i];
        if (k.count() != sol.velocity.count || k.h() != sol.velocity.h) {
            throw ContractError("constraint_residual: kernel mesh does not match the solution");
        }
        const auto a = k.shift();
        const auto f = sol.slice(i);
        // V_w(x, v_n) = -V_w(x, -v_n) = -a_n.
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p) acc += f[p] * (-a[p]) * sol.velocity.dv;
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

std::vector<ReportRow> ExperimentReport::rows_for(const std::string& scheme) const
{
    std::vector<ReportRow> out;
    for (const auto& r : rows) {
        if (r.scheme == scheme) out.push_back(r);
    }
    return out;
}

std::optional<double> ExperimentReport::aggregate(const std::string& scheme) const
{
    std::vector<double> levels, errors;
    for (const auto& r : rows_for(scheme)) {
        levels.push_back(r.level);
        errors.push_back(r.error);
    }
    return aggregate_order(levels, errors);
}

namespace {

std::string fmt_double(double v, const char* spec = "%.10g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<std::string> schemes_in(const ExperimentReport& report)
{
    std::vector<std::string> out;
    for (const auto& r : report.rows) {
        if (std::find(out.begin(), out.end(), r.scheme) == out.end()) out.push_back(r.scheme);
    }
    return out;
}

}  // namespace

void write_report_csv(std::ostream& os, const ExperimentReport& report)
{
    os << "level,error,order,scheme\n";
    for (const auto& r : report.rows) {
        os << fmt_double(r.level, "%.17g") << ',' << fmt_double(r.error, "%.17g") << ',';
        if (r.order) os << fmt_double(*r.order, "%.17g");
        os << ',' << r.scheme << '\n';
    }
}

void print_report(std::ostream& os, const ExperimentReport& report)
{
    os << "# " << report.axis << " study (" << report.quantity << ")\n";
    for (const auto& [key, value] : report.metadata) os << "#   " << key << " = " << value << '\n';
    for (const auto& scheme : schemes_in(report)) {
        os << scheme << '\n';
        os << "  level         " << report.quantity << "          order\n";
        for (const auto& r : report.rows_for(scheme)) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-12g  %-16.6e  %s\n", r.level, r.error,
                          r.order ? fmt_double(*r.order, "%.4f").c_str() : "-");
            os << line;
        }
        if (auto slope = report.aggregate(scheme)) {
            os << "  aggregate order " << fmt_double(*slope, "%.4f") << '\n';
        }
    }
    if (!report.norms.empty()) {
        os << "  R_h       N_v     x        |Theta_d|     |A_d|         |B_d|\n";
        for (const auto& n : report.norms) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-8g  %-6d  %-7g  %-12.6e  %-12.6e  %-12.6e\n",
                          n.coherence_length, n.velocity_count, n.x, n.theta, n.a, n.b);
            os << line;
        }
    }
}

void write_norms_csv(std::ostream& os, const ExperimentReport& report)
{
    os << "R_h,N_v,x,theta,A,B\n";
    for (const auto& n : report.norms) {
        os << fmt_double(n.coherence_length, "%.17g") << ',' << n.velocity_count << ','
           << fmt_double(n.x, "%.17g") << ',' << fmt_double(n.theta, "%.17g") << ','
           << fmt_double(n.a, "%.17g") << ',' << fmt_double(n.b, "%.17g") << '\n';
    }
}

}  // namespace wignerlab
