// wignerlab: experiment driver for the stationary Wigner inflow problem.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "wignerlab/errors.hpp"
#include "wignerlab/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOther = 4;

void write_report(const wignerlab::ExperimentReport& report, const std::filesystem::path& out)
{
    std::filesystem::create_directories(out);
    std::ofstream csv(out / "report.csv", std::ios::binary);
    wignerlab::write_report_csv(csv, report);
    wignerlab::print_report(std::cout, report);
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace wignerlab;

    CLI::App app{"Solver and refinement studies for the stationary Wigner equation with inflow boundaries"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string scheme_override;
    std::string interp = "prolong";
    bool verbose = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"figure", "solve both schemes on one mesh and plot velocity slices"},
        {"conv-v", "velocity refinement study"},
        {"conv-x", "spatial refinement study"},
        {"constraint", "constraint residual S(N_v) across velocity levels"},
        {"solve", "solve one configuration and dump the grid function"},
        {"norms", "spectral norms of Theta_d, A_d and B_d"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--scheme", scheme_override, "original|improved|both")
            ->check(CLI::IsMember({"original", "improved", "both"}));
        sub->add_option("--interp", interp, "velocity transfer for error norms (prolong|sinc|linear)")
            ->check(CLI::IsMember({"prolong", "sinc", "linear"}));
        sub->add_flag("-v,--verbose", verbose, "progress on stderr");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = load_config(config_path);
        if (!scheme_override.empty()) cfg.scheme = parse_scheme_selection(scheme_override);
        RunOptions options;
        options.interpolation = parse_interpolation(interp);
        options.verbose = verbose;
        const std::filesystem::path out(out_dir);

        if (command == "figure") {
            const auto result = run_figure_comparison(cfg, options);
            write_figure_outputs(result, out);
            for (const auto& s : result.slices) {
                std::cout << "slice " << s.location << " at x = " << s.x << '\n';
            }
        } else if (command == "conv-v") {
            write_report(run_v_convergence(cfg, options), out);
        } else if (command == "conv-x") {
            write_report(run_x_convergence(cfg, options), out);
        } else if (command == "constraint") {
            write_report(run_constraint_study(cfg, options), out);
        } else if (command == "solve") {
            std::filesystem::create_directories(out);
            for (const auto& [scheme, sol] : run_solve(cfg, options)) {
                std::ofstream csv(out / ("solution_" + std::string(to_string(scheme)) + ".csv"),
                                  std::ios::binary);
                write_solution_csv(csv, sol);
                std::cout << to_string(scheme) << ": relative residual " << sol.residual << '\n';
            }
        } else if (command == "norms") {
            const auto report = run_norms(cfg);
            std::filesystem::create_directories(out);
            std::ofstream csv(out / "norms.csv", std::ios::binary);
            write_norms_csv(csv, report);
            print_report(std::cout, report);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
