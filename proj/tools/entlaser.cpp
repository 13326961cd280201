#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "entlaser/runtime.hpp"
#include "entlaser/scenario.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;
constexpr int exit_property = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw entlaser::ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace entlaser;

    CLI::App app{"entlaser: Gaussian-moment simulator and Fock-space verifier for "
                 "cavity-enhanced polarization-entangled down-conversion"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    // evolve
    auto* evolve = app.add_subcommand("evolve", "integrate one scenario and write a CSV time series");
    std::string evolve_config, evolve_out, evolve_svg;
    double step_override = 0.0;
    bool svg_log_y = false;
    evolve->add_option("--config", evolve_config, "scenario config (JSON)")->required();
    evolve->add_option("--out", evolve_out, "output CSV path")->required();
    evolve->add_option("--svg", evolve_svg, "optional SVG chart path");
    evolve->add_option("--step", step_override, "override the RK4 step");
    evolve->add_flag("--log-y", svg_log_y, "log-scale y axis in the SVG");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep, one CSV row per point");
    std::string sweep_config, sweep_out;
    int workers = 0;
    int budget_override = 0;
    sweep->add_option("--config", sweep_config, "sweep config (JSON)")->required();
    sweep->add_option("--out", sweep_out, "output CSV path")->required();
    sweep->add_option("--workers", workers, "worker threads (0 = library default)");
    sweep->add_option("--budget", budget_override, "override the sweep-size budget");

    // oracle-check
    auto* oracle = app.add_subcommand("oracle-check", "run a verification suite against the "
                                                      "truncated Fock-space oracle");
    std::string suite = "all";
    std::uint64_t seed = 20240915;
    int cutoff = 12;
    int samples = 10000;
    oracle->add_option("--suite", suite,
                       "engine_vs_oracle | separability | j_bound | loss_laws | all");
    oracle->add_option("--seed", seed, "base RNG seed");
    oracle->add_option("--cutoff", cutoff, "per-mode photon cutoff");
    oracle->add_option("--samples", samples, "sample count for sampling suites");

    // thresholds
    auto* thresh = app.add_subcommand("thresholds", "analytic imperfection bounds at a given <N>");
    double n_mean = 0.0, kappa = 1.0;
    std::string thresh_csv;
    thresh->add_option("--n", n_mean, "mean photon number")->required();
    thresh->add_option("--kappa", kappa, "pair-creation rate");
    thresh->add_option("--csv", thresh_csv, "also write the report as CSV");

    // fig2
    auto* fig2 = app.add_subcommand("fig2", "reference reproduction: photon number and witness "
                                            "ratio over eight passes for three loss imbalances");
    std::string out_dir = ".";
    double fig2_step = Numerics::rk4_default_step;
    fig2->add_option("--out-dir", out_dir, "output directory");
    fig2->add_option("--step", fig2_step, "override the RK4 step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*evolve) {
            auto config = scenario::ScenarioConfig::from_json_text(read_file(evolve_config));
            if (step_override > 0.0) config.step = step_override;
            const auto series = scenario::run_evolve(config);
            scenario::write_file(evolve_out, scenario::to_csv(series));
            if (!evolve_svg.empty()) {
                std::vector<scenario::SvgSeries> charts;
                for (std::size_t i = 0; i < series.column_names.size(); ++i)
                    charts.push_back({series.column_names[i], series.times, series.columns[i]});
                scenario::write_file(
                    evolve_svg, scenario::to_svg(charts, {"scenario", "t", "value", svg_log_y}));
            }
            std::cout << "wrote " << evolve_out << " (" << series.times.size() << " rows)\n";
        } else if (*sweep) {
            auto config = scenario::SweepConfig::from_json_text(read_file(sweep_config));
            if (budget_override > 0) config.budget = budget_override;
            const auto table = scenario::run_sweep(config, workers);
            scenario::write_file(sweep_out, scenario::to_csv(table));
            std::cout << "wrote " << sweep_out << " (" << table.rows.size() << " rows)\n";
        } else if (*oracle) {
            const auto report = scenario::run_oracle_check(suite, seed, cutoff, samples);
            std::cout << scenario::format_report(report);
            if (!report.all_pass()) return exit_property;
        } else if (*thresh) {
            const auto r = witness::thresholds(n_mean, kappa);
            std::cout << "n_mean                      " << format_g17(r.n_mean) << "\n"
                      << "delta_eta_max               " << format_g17(r.delta_eta_max) << "\n"
                      << "delta_lambda_over_kappa_max " << format_g17(r.delta_lambda_over_kappa_max)
                      << "\n"
                      << "delta_lambda_max            " << format_g17(r.delta_lambda_max) << "\n"
                      << "phi_max_sqrt                " << format_g17(r.phi_max_sqrt) << "\n"
                      << "phi_max_linear              " << format_g17(r.phi_max_linear) << "\n"
                      << "eta_critical                " << format_g17(r.eta_critical) << "\n"
                      << "note: order-of-magnitude conditions reported as equalities\n";
            if (!thresh_csv.empty()) {
                std::ostringstream csv;
                csv << "n_mean,delta_eta_max,delta_lambda_over_kappa_max,delta_lambda_max,"
                       "phi_max_sqrt,phi_max_linear,eta_critical\n"
                    << format_g17(r.n_mean) << "," << format_g17(r.delta_eta_max) << ","
                    << format_g17(r.delta_lambda_over_kappa_max) << ","
                    << format_g17(r.delta_lambda_max) << "," << format_g17(r.phi_max_sqrt) << ","
                    << format_g17(r.phi_max_linear) << "," << format_g17(r.eta_critical) << "\n";
                scenario::write_file(thresh_csv, csv.str());
            }
        } else if (*fig2) {
            std::filesystem::create_directories(out_dir);
            const auto result = scenario::fig2_preset(fig2_step);
            const auto written = scenario::write_fig2_outputs(result, out_dir);
            for (const auto& path : written) std::cout << "wrote " << path << "\n";
            const auto& balanced = result.series.front();
            std::cout << "N(t=8) = " << format_g17(balanced.column("N").back())
                      << ", balanced ratio(t=8) = " << format_g17(balanced.column("ratio").back())
                      << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
