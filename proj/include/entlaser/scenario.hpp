#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entlaser/gaussian.hpp"
#include "entlaser/witness.hpp"

namespace entlaser::scenario {

/// One evolution run: drift parameters, integration controls, optional
/// post-hoc detection loss, and the observables to sample.
struct ScenarioConfig {
    gaussian::DriftSpec spec;
    double t_end = 1.0;
    double step = Numerics::rk4_default_step;
    double sample_every = 0.25;
    std::optional<std::array<double, 4>> post_loss;
    std::vector<std::string> outputs = {"N", "J2", "ratio"};

    void validate() const;

    static ScenarioConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    bool operator==(const ScenarioConfig& other) const;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;  // one vector per name
    std::map<std::string, std::string> metadata;

    const std::vector<double>& column(const std::string& name) const;
};

/// Cartesian-product sweep over drift parameters plus an optional balanced
/// post-loss transmission axis ("eta"). Axes expand in a fixed canonical
/// order so row order never depends on config key order or thread timing.
struct SweepConfig {
    ScenarioConfig base;
    std::map<std::string, std::vector<double>> grid;
    int budget = 10000;

    static SweepConfig from_json_text(const std::string& text);
};

struct SweepRow {
    std::vector<double> axis_values;
    double n;
    double j2;
    double ratio;
    bool entangled;
};

struct SweepTable {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;
};

TimeSeries run_evolve(const ScenarioConfig& config);
SweepTable run_sweep(const SweepConfig& config, int workers = 0);

/// The reference reproduction: kappa0 = 1, lambda_bar = 0.03, Lambda = 0.01,
/// eight passes, loss-rate imbalance 0, 0.001 and 0.002.
struct Fig2Result {
    std::vector<double> delta_lambdas;
    std::vector<TimeSeries> series;  // one per delta lambda
};

Fig2Result fig2_preset(double step = Numerics::rk4_default_step);

/// Writes Fig2Result CSVs plus ratio/photon-number SVG charts into out_dir.
std::vector<std::string> write_fig2_outputs(const Fig2Result& result, const std::string& out_dir);

// ---- serialization ----

std::string to_csv(const TimeSeries& series);
std::string to_csv(const SweepTable& table);
void write_file(const std::string& path, const std::string& content);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    bool log_y = false;
};

std::string to_svg(const std::vector<SvgSeries>& series, const SvgOptions& options);

// ---- verification suites ----

struct PropertyResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::vector<PropertyResult> results;
    bool all_pass() const;
};

/// suite: engine_vs_oracle | separability | j_bound | loss_laws | all
SuiteReport run_oracle_check(const std::string& suite, std::uint64_t seed, int cutoff,
                             int sample_count = 10000);

std::string format_report(const SuiteReport& report);

}  // namespace entlaser::scenario
