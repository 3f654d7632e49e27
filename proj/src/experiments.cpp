#include "wignerlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

namespace {

std::string num(double v, const char* spec = "%.17g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void log_progress(const RunOptions& options, const std::string& what)
{
    if (options.verbose) std::cerr << "[wignerlab] " << what << std::endl;
}

int require_n_x(const RunConfig& cfg)
{
    if (cfg.n_x) return *cfg.n_x;
    throw ConfigError("this study needs a single N_x");
}

VelocityMesh single_velocity_mesh(const RunConfig& cfg)
{
    if (!cfg.n_v || !cfg.coherence_length) throw ConfigError("this study needs N_v and R_h");
    return velocity_mesh_from_coherence(*cfg.n_v, *cfg.coherence_length);
}

void require_levels(std::size_t count, const char* key)
{
    if (count < 2) {
        throw ConfigError(std::string(key) + ": a refinement study needs >= 2 levels");
    }
}

template <typename T>
void require_doubling(const std::vector<T>& levels, const char* key)
{
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        if (levels[k + 1] != 2 * levels[k]) {
            throw ConfigError(std::string(key) + ": consecutive levels must differ by a factor 2");
        }
    }
}

std::size_t nearest_node(const SpatialMesh& mesh, double x)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        if (std::abs(mesh.nodes[i] - x) < std::abs(mesh.nodes[best] - x)) best = i;
    }
    return best;
}

void add_rows(ExperimentReport& report, const std::vector<double>& levels,
              const std::vector<double>& values, Scheme scheme)
{
    const auto orders = convergence_order(values);
    for (std::size_t k = 0; k < values.size(); ++k) {
        ReportRow row;
        row.level = levels[k];
        row.error = values[k];
        if (k > 0) row.order = orders[k - 1];
        row.scheme = std::string(to_string(scheme));
        report.rows.push_back(row);
    }
}

}  // namespace

std::map<Scheme, WignerSolution> run_solve(const RunConfig& cfg, const RunOptions& options)
{
    const auto profile = cfg.profile();
    const auto space = build_spatial_mesh(cfg.device_length, require_n_x(cfg));
    const auto velocity = single_velocity_mesh(cfg);
    const auto quad = cfg.quadrature();
    const auto kernels = build_kernels(profile, space, velocity, quad);
    std::map<Scheme, WignerSolution> out;
    for (Scheme s : schemes_of(cfg.scheme)) {
        log_progress(options, std::string("solving ") + std::string(to_string(s)));
        BlockSystem sys(space, velocity, kernels, s, cfg.boundary());
        out.emplace(s, solve(sys, options.solve));
    }
    return out;
}

FigureResult run_figure_comparison(const RunConfig& cfg, const RunOptions& options)
{
    FigureResult result;
    result.solutions = run_solve(cfg, options);
    const auto& any = result.solutions.begin()->second;
    result.velocity = any.velocity;

    std::vector<std::pair<std::string, double>> locations;
    if (cfg.slice_x.empty()) {
        locations = {{"left", any.space.nodes[1]}, {"center", 0.0}};
    } else {
        for (double x : cfg.slice_x) locations.emplace_back("x" + num(x, "%g"), x);
    }
    for (const auto& [name, x] : locations) {
        Slice s;
        s.location = name;
        s.node = nearest_node(any.space, x);
        s.x = any.space.nodes[s.node];
        for (const auto& [scheme, sol] : result.solutions) {
            const auto sl = sol.slice(s.node);
            s.values[scheme].assign(sl.begin(), sl.end());
        }
        result.slices.push_back(std::move(s));
    }
    return result;
}

std::string render_slice_svg(const Slice& slice, const VelocityMesh& velocity)
{
    const double width = 640.0, height = 420.0, margin = 56.0;
    double vmin = velocity.nodes.front(), vmax = velocity.nodes.back();
    double fmin = 0.0, fmax = 0.0;
    for (const auto& [scheme, values] : slice.values) {
        for (double f : values) {
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
        }
    }
    if (fmax == fmin) fmax = fmin + 1.0;
    auto sx = [&](double v) { return margin + (v - vmin) / (vmax - vmin) * (width - 2 * margin); };
    auto sy = [&](double f) {
        return height - margin - (f - fmin) / (fmax - fmin) * (height - 2 * margin);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
       << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">v</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\">f</text>\n";
    os << "<text x=\"" << margin << "\" y=\"" << height - margin + 18 << "\" font-size=\"11\">"
       << num(vmin, "%.4g") << "</text>\n";
    os << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 18
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(vmax, "%.4g") << "</text>\n";
    os << "<text x=\"" << margin - 4 << "\" y=\"" << margin << "\" font-size=\"11\" text-anchor=\"end\">"
       << num(fmax, "%.4g") << "</text>\n";
    os << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(fmin, "%.4g") << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\">f(x = " << num(slice.x, "%g")
       << ", v)</text>\n";

    int legend = 0;
    for (const auto& [scheme, values] : slice.values) {
        const char* color = scheme == Scheme::original ? "#c0392b" : "#2471a3";
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t p = 0; p < values.size(); ++p) {
            os << num(sx(velocity.nodes[p]), "%.3f") << ',' << num(sy(values[p]), "%.3f");
            if (p + 1 < values.size()) os << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - margin - 4 << "\" y=\"" << margin + 16 * legend
           << "\" fill=\"" << color << "\" text-anchor=\"end\" font-size=\"12\">" << to_string(scheme)
           << "</text>\n";
        ++legend;
    }
    os << "</svg>\n";
    return os.str();
}

void write_figure_outputs(const FigureResult& result, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::ofstream meta(out_dir / "figure_metadata.txt", std::ios::binary);
    meta << "N_v = " << result.velocity.count << "\nR_h = " << num(result.velocity.coherence_length)
         << '\n';
    for (const auto& s : result.slices) {
        meta << "slice " << s.location << " x = " << num(s.x) << " node = " << s.node << '\n';
        for (const auto& [scheme, values] : s.values) {
            std::ofstream out(out_dir / ("slice_" + s.location + "_" + std::string(to_string(scheme)) + ".csv"),
                              std::ios::binary);
            out << "v,f\n";
            for (std::size_t p = 0; p < values.size(); ++p) {
                out << num(result.velocity.nodes[p]) << ',' << num(values[p]) << '\n';
            }
        }
        std::ofstream svg(out_dir / ("figure_" + s.location + ".svg"), std::ios::binary);
        svg << render_slice_svg(s, result.velocity);
    }
}

VelocitySweep run_velocity_sweep(const RunConfig& cfg, const RunOptions& options)
{
    require_levels(cfg.nv_levels.size(), "Nv_levels");
    require_doubling(cfg.nv_levels, "Nv_levels");
    require_doubling(cfg.rh_levels, "Rh_levels");

    const auto profile = cfg.profile();
    const auto space = build_spatial_mesh(cfg.device_length, require_n_x(cfg));
    const auto quad = cfg.quadrature();
    const auto schemes = schemes_of(cfg.scheme);
    WignerPotentialCache cache(profile);

    const std::size_t levels = cfg.nv_levels.size();
    std::map<Scheme, std::vector<WignerSolution>> solutions;
    std::map<Scheme, std::vector<double>> residuals;
    for (Scheme s : schemes) {
        solutions[s].resize(levels);
        residuals[s].resize(levels);
    }

    // Finest first so coarser kernels are subsampled from the cache.
    for (std::size_t k = levels; k-- > 0;) {
        const auto velocity = velocity_mesh_from_coherence(cfg.nv_levels[k], cfg.rh_levels[k]);
        const auto kernels = build_kernels(profile, space, velocity, quad, &cache);
        for (Scheme s : schemes) {
            const auto t0 = std::chrono::steady_clock::now();
            BlockSystem sys(space, velocity, kernels, s, cfg.boundary());
            auto sol = solve(sys, options.solve);
            residuals[s][k] = constraint_residual(sol, *kernels);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            log_progress(options, std::string(to_string(s)) + " N_v=" + std::to_string(velocity.count) +
                                      " residual=" + num(sol.residual, "%.2e") +
                                      " time=" + num(secs, "%.1f") + "s");
            solutions[s][k] = std::move(sol);
        }
    }

    VelocitySweep out;
    out.convergence.axis = "velocity";
    out.convergence.quantity = "L2 error";
    out.constraint.axis = "constraint";
    out.constraint.quantity = "S(N_v)";
    for (auto* r : {&out.convergence, &out.constraint}) {
        r->metadata = {{"N_x", std::to_string(space.intervals)},
                       {"Ly", num(quad.cutoff(), "%g")},
                       {"dy", num(quad.step(), "%g")},
                       {"edge rule", to_string(cfg.edge_rule)},
                       {"reference", "N_v = " + std::to_string(cfg.nv_levels.back())},
                       {"velocity transfer", to_string(options.interpolation)}};
    }

    std::vector<double> all_levels(cfg.nv_levels.begin(), cfg.nv_levels.end());
    std::vector<double> error_levels(all_levels.begin(), all_levels.end() - 1);
    for (Scheme s : schemes) {
        const auto& sols = solutions[s];
        std::vector<double> errors;
        for (std::size_t k = 0; k + 1 < levels; ++k) {
            errors.push_back(l2_error(sols[k], sols.back(), options.interpolation));
        }
        add_rows(out.convergence, error_levels, errors, s);
        add_rows(out.constraint, all_levels, residuals[s], s);
    }
    return out;
}

ExperimentReport run_v_convergence(const RunConfig& cfg, const RunOptions& options)
{
    return run_velocity_sweep(cfg, options).convergence;
}

ExperimentReport run_constraint_study(const RunConfig& cfg, const RunOptions& options)
{
    return run_velocity_sweep(cfg, options).constraint;
}

ExperimentReport run_x_convergence(const RunConfig& cfg, const RunOptions& options)
{
    require_levels(cfg.nx_levels.size(), "Nx_levels");
    require_doubling(cfg.nx_levels, "Nx_levels");

    const auto profile = cfg.profile();
    const auto velocity = single_velocity_mesh(cfg);
    const auto quad = cfg.quadrature();
    const auto schemes = schemes_of(cfg.scheme);
    WignerPotentialCache cache(profile);

    std::map<Scheme, std::vector<WignerSolution>> solutions;
    for (int nx : cfg.nx_levels) {
        const auto space = build_spatial_mesh(cfg.device_length, nx);
        const auto kernels = build_kernels(profile, space, velocity, quad, &cache);
        for (Scheme s : schemes) {
            BlockSystem sys(space, velocity, kernels, s, cfg.boundary());
            auto sol = solve(sys, options.solve);
            log_progress(options, std::string(to_string(s)) + " N_x=" + std::to_string(nx) +
                                      " residual=" + num(sol.residual, "%.2e"));
            solutions[s].push_back(std::move(sol));
        }
    }

    ExperimentReport report;
    report.axis = "space";
    report.quantity = "L2 error";
    report.metadata = {{"N_v", std::to_string(velocity.count)},
                       {"R_h", num(velocity.coherence_length, "%g")},
                       {"Ly", num(quad.cutoff(), "%g")},
                       {"dy", num(quad.step(), "%g")},
                       {"edge rule", to_string(cfg.edge_rule)},
                       {"reference", "N_x = " + std::to_string(cfg.nx_levels.back())},
                       {"velocity transfer", to_string(options.interpolation)}};
    std::vector<double> levels(cfg.nx_levels.begin(), cfg.nx_levels.end() - 1);
    for (Scheme s : schemes) {
        const auto& sols = solutions[s];
        std::vector<double> errors;
        for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
            errors.push_back(l2_error(sols[k], sols.back(), options.interpolation));
        }
        add_rows(report, levels, errors, s);
    }
    return report;
}

ExperimentReport run_norms(const RunConfig& cfg)
{
    const auto profile = cfg.profile();
    const auto quad = cfg.quadrature();
    std::vector<std::pair<int, double>> meshes;
    if (!cfg.nv_levels.empty()) {
        for (std::size_t k = 0; k < cfg.nv_levels.size(); ++k) {
            meshes.emplace_back(cfg.nv_levels[k], cfg.rh_levels[k]);
        }
    } else {
        const auto v = single_velocity_mesh(cfg);
        meshes.emplace_back(v.count, v.coherence_length);
    }
    ExperimentReport report;
    report.axis = "norms";
    report.quantity = "spectral norm";
    report.metadata = {{"x", num(cfg.norm_x, "%g")},
                       {"max|V|", num(profile.max_abs(), "%g")},
                       {"Ly", num(quad.cutoff(), "%g")},
                       {"dy", num(quad.step(), "%g")},
                       {"edge rule", to_string(cfg.edge_rule)}};
    for (const auto& [count, rh] : meshes) {
        const auto velocity = velocity_mesh_from_coherence(count, rh);
        const auto kernel = build_theta_kernel(profile, cfg.norm_x, velocity, quad);
        NormRow row;
        row.coherence_length = rh;
        row.velocity_count = count;
        row.x = cfg.norm_x;
        row.theta = operator_norm(kernel, velocity, OperatorKind::theta);
        row.a = operator_norm(kernel, velocity, OperatorKind::A);
        row.b = operator_norm(kernel, velocity, OperatorKind::B);
        report.norms.push_back(row);
    }
    return report;
}

}  // namespace wignerlab
