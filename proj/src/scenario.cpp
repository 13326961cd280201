#include "entlaser/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "json.hpp"

namespace entlaser::scenario {

using json = nlohmann::json;
using gaussian::CovarianceState;
using gaussian::DriftSpec;

namespace {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError("config: " + what); }

double require_number(const json& j, const std::string& key, double fallback, bool required) {
    if (!j.contains(key)) {
        if (required) config_fail("missing field '" + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) config_fail("field '" + key + "' must be a number");
    return j[key].get<double>();
}

const std::vector<std::string> known_scenario_keys = {
    "spec", "t_end", "step", "sample_every", "post_loss", "outputs"};
const std::vector<std::string> known_spec_keys = {
    "kappa0", "Lambda", "lambda_a", "lambda_b", "phi", "f"};
const std::vector<std::string> known_output_names = {"N", "J2", "ratio", "variances"};

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            config_fail("unknown field '" + item.key() + "' in " + where);
}

DriftSpec spec_from_json(const json& j) {
    if (!j.is_object()) config_fail("'spec' must be an object");
    reject_unknown_keys(j, known_spec_keys, "spec");
    DriftSpec s;
    s.kappa0 = require_number(j, "kappa0", s.kappa0, false);
    s.Lambda = require_number(j, "Lambda", s.Lambda, false);
    s.lambda_a = require_number(j, "lambda_a", s.lambda_a, false);
    s.lambda_b = require_number(j, "lambda_b", s.lambda_b, false);
    s.phi = require_number(j, "phi", s.phi, false);
    s.f = require_number(j, "f", s.f, false);
    return s;
}

json spec_to_json(const DriftSpec& s) {
    return json{{"kappa0", s.kappa0}, {"Lambda", s.Lambda},   {"lambda_a", s.lambda_a},
                {"lambda_b", s.lambda_b}, {"phi", s.phi},     {"f", s.f}};
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) config_fail("scenario must be an object");
    reject_unknown_keys(j, known_scenario_keys, "scenario");
    ScenarioConfig c;
    if (j.contains("spec")) c.spec = spec_from_json(j["spec"]);
    c.t_end = require_number(j, "t_end", c.t_end, true);
    c.step = require_number(j, "step", c.step, false);
    c.sample_every = require_number(j, "sample_every", c.sample_every, false);
    if (j.contains("post_loss")) {
        const auto& pl = j["post_loss"];
        if (pl.is_number()) {
            const double e = pl.get<double>();
            c.post_loss = {e, e, e, e};
        } else if (pl.is_array() && pl.size() == 4) {
            std::array<double, 4> eta{};
            for (int i = 0; i < 4; ++i) {
                if (!pl[i].is_number()) config_fail("post_loss entries must be numbers");
                eta[i] = pl[i].get<double>();
            }
            c.post_loss = eta;
        } else {
            config_fail("post_loss must be a number or an array of 4 numbers");
        }
    }
    if (j.contains("outputs")) {
        if (!j["outputs"].is_array()) config_fail("outputs must be an array of names");
        c.outputs.clear();
        for (const auto& o : j["outputs"]) {
            if (!o.is_string()) config_fail("outputs must be an array of names");
            const std::string name = o.get<std::string>();
            if (std::find(known_output_names.begin(), known_output_names.end(), name) ==
                known_output_names.end())
                config_fail("unknown output '" + name + "'");
            c.outputs.push_back(name);
        }
    }
    c.validate();
    return c;
}

json scenario_to_json(const ScenarioConfig& c) {
    json j{{"spec", spec_to_json(c.spec)},
           {"t_end", c.t_end},
           {"step", c.step},
           {"sample_every", c.sample_every},
           {"outputs", c.outputs}};
    if (c.post_loss) j["post_loss"] = *c.post_loss;
    return j;
}

}  // namespace

void ScenarioConfig::validate() const {
    spec.validate();
    if (!(t_end >= 0.0)) config_fail("t_end must be >= 0");
    if (!(step > 0.0)) config_fail("step must be > 0");
    if (!(sample_every >= step)) config_fail("sample_every must be >= step");
    if (post_loss)
        for (double e : *post_loss)
            if (!(e >= 0.0 && e <= 1.0)) config_fail("post_loss entries must lie in [0, 1]");
    if (outputs.empty()) config_fail("outputs must not be empty");
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

std::string ScenarioConfig::to_json_text() const { return scenario_to_json(*this).dump(); }

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
    return spec.kappa0 == other.spec.kappa0 && spec.Lambda == other.spec.Lambda &&
           spec.lambda_a == other.spec.lambda_a && spec.lambda_b == other.spec.lambda_b &&
           spec.phi == other.spec.phi && spec.f == other.spec.f && t_end == other.t_end &&
           step == other.step && sample_every == other.sample_every &&
           post_loss == other.post_loss && outputs == other.outputs;
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return columns[i];
    throw std::invalid_argument("TimeSeries::column: no column named " + name);
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) config_fail("sweep config must be an object");
    reject_unknown_keys(j, {"base", "grid", "budget"}, "sweep");
    SweepConfig c;
    if (!j.contains("base")) config_fail("sweep config needs a 'base' scenario");
    c.base = scenario_from_json(j["base"]);
    if (!j.contains("grid") || !j["grid"].is_object())
        config_fail("sweep config needs a 'grid' object");
    for (const auto& item : j["grid"].items()) {
        if (!item.value().is_array() || item.value().empty())
            config_fail("grid axis '" + item.key() + "' must be a non-empty array");
        std::vector<double> values;
        for (const auto& v : item.value()) {
            if (!v.is_number()) config_fail("grid axis '" + item.key() + "' must be numeric");
            values.push_back(v.get<double>());
        }
        c.grid[item.key()] = std::move(values);
    }
    if (j.contains("budget")) {
        if (!j["budget"].is_number_integer()) config_fail("budget must be an integer");
        c.budget = j["budget"].get<int>();
    }
    return c;
}

namespace {

struct ObservationRow {
    double n, j2, ratio;
    std::array<double, 8> variances;
    bool entangled;
};

ObservationRow observe(const CovarianceState& state, const DriftSpec& spec,
                       const std::optional<std::array<double, 4>>& post_loss) {
    CovarianceState observed = state;
    if (spec.phi != 0.0) observed = gaussian::apply_phase_mismatch(observed, spec.phi);
    if (post_loss) observed = gaussian::apply_loss(observed, *post_loss);
    const auto report = gaussian::witness(observed);
    ObservationRow row{};
    row.n = report.n;
    row.j2 = report.j2;
    row.ratio = report.ratio;
    row.entangled = report.entangled;
    for (int i = 0; i < 8; ++i) row.variances[i] = observed.sigma(i, i);
    return row;
}

std::vector<std::string> expand_column_names(const std::vector<std::string>& outputs) {
    static const std::array<std::string, 8> var_names = {
        "var_x1", "var_p1", "var_x2", "var_p2", "var_x3", "var_p3", "var_x4", "var_p4"};
    std::vector<std::string> names;
    for (const auto& o : outputs) {
        if (o == "variances")
            names.insert(names.end(), var_names.begin(), var_names.end());
        else
            names.push_back(o);
    }
    return names;
}

void append_row(TimeSeries& series, const std::vector<std::string>& outputs,
                const ObservationRow& row, double t) {
    series.times.push_back(t);
    std::size_t col = 0;
    for (const auto& o : outputs) {
        if (o == "N") series.columns[col++].push_back(row.n);
        else if (o == "J2") series.columns[col++].push_back(row.j2);
        else if (o == "ratio") series.columns[col++].push_back(row.ratio);
        else
            for (int i = 0; i < 8; ++i) series.columns[col++].push_back(row.variances[i]);
    }
}

}  // namespace

TimeSeries run_evolve(const ScenarioConfig& config) {
    config.validate();

    TimeSeries series;
    series.column_names = expand_column_names(config.outputs);
    series.columns.resize(series.column_names.size());
    series.metadata["config"] = config.to_json_text();
    series.metadata["version"] = version_string;

    CovarianceState state = CovarianceState::vacuum();
    append_row(series, config.outputs, observe(state, config.spec, config.post_loss), 0.0);

    const std::int64_t full_samples =
        static_cast<std::int64_t>(std::floor(config.t_end / config.sample_every + 1e-9));
    for (std::int64_t i = 1; i <= full_samples; ++i) {
        const double target = static_cast<double>(i) * config.sample_every;
        state = gaussian::evolve_rk4(state, config.spec, target, config.step);
        append_row(series, config.outputs, observe(state, config.spec, config.post_loss), target);
    }
    if (state.t < config.t_end) {
        state = gaussian::evolve_rk4(state, config.spec, config.t_end,
                                     std::min(config.step, config.t_end - state.t));
        append_row(series, config.outputs, observe(state, config.spec, config.post_loss),
                   config.t_end);
    }
    return series;
}

namespace {

// canonical axis order: sweep rows are lexicographic in this order
const std::vector<std::string> sweep_axes = {"kappa0", "Lambda", "lambda_a", "lambda_b",
                                             "phi", "f", "eta"};

void apply_axis(DriftSpec& spec, std::optional<std::array<double, 4>>& post_loss,
                const std::string& axis, double value) {
    if (axis == "kappa0") spec.kappa0 = value;
    else if (axis == "Lambda") spec.Lambda = value;
    else if (axis == "lambda_a") spec.lambda_a = value;
    else if (axis == "lambda_b") spec.lambda_b = value;
    else if (axis == "phi") spec.phi = value;
    else if (axis == "f") spec.f = value;
    else if (axis == "eta") post_loss = std::array<double, 4>{value, value, value, value};
}

}  // namespace

SweepTable run_sweep(const SweepConfig& config, int workers) {
    config.base.validate();
    for (const auto& [axis, values] : config.grid) {
        if (std::find(sweep_axes.begin(), sweep_axes.end(), axis) == sweep_axes.end())
            config_fail("unknown grid axis '" + axis + "'");
        (void)values;
    }

    SweepTable table;
    std::vector<std::vector<double>> axis_values;
    std::int64_t total = 1;
    for (const auto& axis : sweep_axes) {
        const auto it = config.grid.find(axis);
        if (it == config.grid.end()) continue;
        table.axis_names.push_back(axis);
        axis_values.push_back(it->second);
        total *= static_cast<std::int64_t>(it->second.size());
    }
    if (table.axis_names.empty()) config_fail("sweep grid must have at least one axis");
    if (total > config.budget)
        config_fail("sweep size " + std::to_string(total) + " exceeds budget of " +
                    std::to_string(config.budget));

    table.rows.resize(total);
    const int axes = static_cast<int>(axis_values.size());
    const bool parallel = runtime::parallel_enabled();
    const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel)
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::vector<double> point(axes);
        std::int64_t rem = flat;
        for (int a = axes - 1; a >= 0; --a) {
            const auto& vals = axis_values[a];
            point[a] = vals[rem % vals.size()];
            rem /= static_cast<std::int64_t>(vals.size());
        }

        DriftSpec spec = config.base.spec;
        std::optional<std::array<double, 4>> post_loss = config.base.post_loss;
        for (int a = 0; a < axes; ++a)
            apply_axis(spec, post_loss, table.axis_names[a], point[a]);

        CovarianceState state = CovarianceState::vacuum();
        if (config.base.t_end > 0.0)
            state = gaussian::evolve_rk4(state, spec, config.base.t_end, config.base.step);
        const ObservationRow row = observe(state, spec, post_loss);

        SweepRow& out = table.rows[flat];
        out.axis_values = std::move(point);
        out.n = row.n;
        out.j2 = row.j2;
        out.ratio = row.ratio;
        out.entangled = row.entangled;
    }
    return table;
}

Fig2Result fig2_preset(double step) {
    Fig2Result result;
    result.delta_lambdas = {0.0, 0.001, 0.002};
    for (const double dl : result.delta_lambdas) {
        ScenarioConfig config;
        config.spec.kappa0 = 1.0;
        config.spec.Lambda = 0.01;
        config.spec.lambda_a = 0.03 + dl / 2.0;
        config.spec.lambda_b = 0.03 - dl / 2.0;
        config.t_end = 8.0;
        config.step = step;
        config.sample_every = 0.25;
        config.outputs = {"N", "J2", "ratio"};
        result.series.push_back(run_evolve(config));
    }
    return result;
}

std::vector<std::string> write_fig2_outputs(const Fig2Result& result, const std::string& out_dir) {
    std::vector<std::string> written;
    std::vector<SvgSeries> ratio_series, n_series;
    for (std::size_t i = 0; i < result.series.size(); ++i) {
        const TimeSeries& ts = result.series[i];
        char name[64];
        std::snprintf(name, sizeof(name), "fig2_dl%g.csv", result.delta_lambdas[i]);
        const std::string path = out_dir + "/" + name;
        write_file(path, to_csv(ts));
        written.push_back(path);

        char label[64];
        std::snprintf(label, sizeof(label), "dl=%g", result.delta_lambdas[i]);
        ratio_series.push_back({label, ts.times, ts.column("ratio")});
        n_series.push_back({label, ts.times, ts.column("N")});
    }

    const std::string ratio_path = out_dir + "/fig2_ratio.svg";
    write_file(ratio_path, to_svg(ratio_series, {"witness ratio vs passes", "t", "J2/N", false}));
    written.push_back(ratio_path);

    const std::string n_path = out_dir + "/fig2_photon_number.svg";
    write_file(n_path, to_svg({n_series[0]}, {"mean photon number vs passes", "t", "N", true}));
    written.push_back(n_path);
    return written;
}

std::string to_csv(const TimeSeries& series) {
    std::ostringstream out;
    for (const auto& [key, value] : series.metadata) out << "# " << key << ": " << value << "\n";
    out << "t";
    for (const auto& name : series.column_names) out << "," << name;
    out << "\n";
    for (std::size_t r = 0; r < series.times.size(); ++r) {
        out << format_g17(series.times[r]);
        for (const auto& col : series.columns) out << "," << format_g17(col[r]);
        out << "\n";
    }
    return out.str();
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "# version: " << version_string << "\n";
    for (std::size_t a = 0; a < table.axis_names.size(); ++a)
        out << (a ? "," : "") << table.axis_names[a];
    out << ",N,J2,ratio,entangled\n";
    for (const auto& row : table.rows) {
        for (std::size_t a = 0; a < row.axis_values.size(); ++a)
            out << (a ? "," : "") << format_g17(row.axis_values[a]);
        out << "," << format_g17(row.n) << "," << format_g17(row.j2) << ","
            << format_g17(row.ratio) << "," << (row.entangled ? 1 : 0) << "\n";
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string to_svg(const std::vector<SvgSeries>& series, const SvgOptions& options) {
    constexpr int width = 800, height = 500;
    constexpr int ml = 70, mr = 160, mt = 40, mb = 50;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    static const std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                       "#9467bd", "#ff7f0e", "#8c564b"};

    auto y_value = [&](double y) { return options.log_y ? std::log10(y) : y; };

    bool first = true;
    Range xr, yr;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (options.log_y && !(s.y[i] > 0.0)) continue;
            if (first) {
                xr.lo = xr.hi = s.x[i];
                yr.lo = yr.hi = y_value(s.y[i]);
                first = false;
            } else {
                xr.expand(s.x[i]);
                yr.expand(y_value(s.y[i]));
            }
        }
    if (first) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    if (xr.hi == xr.lo) xr.hi = xr.lo + 1.0;
    if (yr.hi == yr.lo) yr.hi = yr.lo + 1.0;

    auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return mt + plot_h - (y_value(y) - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << options.title << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
        << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + plot_h << "\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double gx = px(fx);
        out << "<line x1=\"" << gx << "\" y1=\"" << mt + plot_h << "\" x2=\"" << gx << "\" y2=\""
            << mt + plot_h + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << gx << "\" y=\"" << mt + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_tick(fx) << "</text>\n";

        const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        const double gy = mt + plot_h - (fy - yr.lo) / (yr.hi - yr.lo) * plot_h;
        const double label = options.log_y ? std::pow(10.0, fy) : fy;
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_tick(label) << "</text>\n";
    }
    out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << options.x_label << "</text>\n"
        << "<text x=\"18\" y=\"" << mt + plot_h / 2 << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << mt + plot_h / 2 << ")\">" << options.y_label << (options.log_y ? " (log)" : "")
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % palette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (options.log_y && !(series[s].y[i] > 0.0)) continue;
            out << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
        }
        out << "\"/>\n";
        const double ly = mt + 16.0 * (s + 1);
        out << "<line x1=\"" << ml + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
            << ml + plot_w + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + plot_w + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

bool SuiteReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const PropertyResult& r) { return r.pass; });
}

std::string format_report(const SuiteReport& report) {
    std::ostringstream out;
    for (const auto& r : report.results)
        out << (r.pass ? "PASS" : "FAIL") << " " << r.name << " deviation=" << format_g17(r.deviation)
            << " tol=" << format_g17(r.tolerance) << "\n";
    out << (report.all_pass() ? "ALL PASS" : "SUITE FAILED") << " (" << report.results.size()
        << " properties)\n";
    return out.str();
}

namespace {

void add_result(SuiteReport& report, const std::string& name, double deviation, double tol) {
    report.results.push_back({name, deviation, tol, deviation <= tol});
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void engine_vs_oracle_suite(SuiteReport& report, int cutoff) {
    const auto number_form = stokes::number_quadratic_form();

    // lossless state at tau = 0.5, both pictures
    {
        const double tau = 0.5;
        DriftSpec spec;
        spec.kappa0 = 1.0;
        const CovarianceState engine = gaussian::evolve_analytic_balanced(spec, tau);
        const fock::FockState oracle = fock::build_ideal_state(tau, cutoff);
        const auto ops = stokes::build_fock_operators(cutoff);

        const double n_e = gaussian::expect_quadratic(engine, number_form);
        const double n_o = fock::expectation(oracle, ops.n);
        const double n_exact = 4.0 * std::sinh(tau) * std::sinh(tau);
        add_result(report, "photon_number_engine_vs_oracle_tau0.5", rel_diff(n_e, n_o), 1e-6);
        add_result(report, "photon_number_law_tau0.5", rel_diff(n_o, n_exact), 1e-6);
        add_result(report, "lossless_j2_engine_tau0.5", std::abs(gaussian::expect_J2(engine)),
                   1e-8);
        add_result(report, "lossless_j2_oracle_tau0.5",
                   std::abs(fock::expectation(oracle, ops.j2)), 1e-8);
    }

    // phase mismatch: exact evolution under the mismatched generator vs the
    // balanced engine state rotated after the fact
    {
        const double tau = 0.3, phi = 0.2;
        const auto ops = stokes::build_fock_operators(cutoff);
        const FockBasis basis(4, cutoff);
        fock::FockState vacuum{basis, Eigen::VectorXcd::Zero(basis.dim())};
        vacuum.amplitudes[0] = 1.0;
        const auto h = fock::build_hamiltonian(1.0, phi, 1.0, cutoff);
        const auto evolved = fock::evolve_exact(vacuum, h, tau);

        DriftSpec spec;
        spec.kappa0 = 1.0;
        const CovarianceState engine =
            gaussian::apply_phase_mismatch(gaussian::evolve_analytic_balanced(spec, tau), phi);

        add_result(report, "phase_mismatch_j2_tau0.3_phi0.2",
                   rel_diff(fock::expectation(evolved, ops.j2), gaussian::expect_J2(engine)),
                   1e-6);
        add_result(report, "phase_mismatch_n_tau0.3_phi0.2",
                   rel_diff(fock::expectation(evolved, ops.n),
                            gaussian::expect_quadratic(engine, number_form)),
                   1e-6);
    }

    // amplitude mismatch
    {
        const double tau = 0.3, f = 0.9;
        const auto ops = stokes::build_fock_operators(cutoff);
        const FockBasis basis(4, cutoff);
        fock::FockState vacuum{basis, Eigen::VectorXcd::Zero(basis.dim())};
        vacuum.amplitudes[0] = 1.0;
        const auto h = fock::build_hamiltonian(1.0, 0.0, f, cutoff);
        const auto evolved = fock::evolve_exact(vacuum, h, tau);

        DriftSpec spec;
        spec.kappa0 = 1.0;
        spec.f = f;
        const CovarianceState engine =
            gaussian::evolve_rk4(CovarianceState::vacuum(), spec, tau, 1e-4);

        add_result(report, "amplitude_mismatch_j2_tau0.3_f0.9",
                   rel_diff(fock::expectation(evolved, ops.j2), gaussian::expect_J2(engine)),
                   1e-6);
        add_result(report, "amplitude_mismatch_n_tau0.3_f0.9",
                   rel_diff(fock::expectation(evolved, ops.n),
                            gaussian::expect_quadratic(engine, number_form)),
                   1e-6);
    }

    // post-hoc loss channels at density-matrix scale
    {
        const double tau = 0.2;
        const int density_cutoff = std::min(cutoff, 6);
        const auto ops = stokes::build_fock_operators(density_cutoff);
        const std::array<double, 4> eta = {0.9, 0.9, 0.7, 0.7};
        const auto rho = fock::apply_loss_channel(
            fock::FockDensity::from_state(fock::build_ideal_state(tau, density_cutoff)), eta);

        DriftSpec spec;
        spec.kappa0 = 1.0;
        const CovarianceState engine =
            gaussian::apply_loss(gaussian::evolve_analytic_balanced(spec, tau), eta);

        add_result(report, "loss_channel_j2_tau0.2",
                   rel_diff(fock::expectation(rho, ops.j2), gaussian::expect_J2(engine)), 1e-6);
        add_result(report, "loss_channel_n_tau0.2",
                   rel_diff(fock::expectation(rho, ops.n),
                            gaussian::expect_quadratic(engine, number_form)),
                   1e-6);
    }
}

void separability_suite(SuiteReport& report, std::uint64_t seed, int cutoff, int count) {
    using witness::SeparableGenerator;
    const int per_generator = std::max(1, count / 3);
    for (const auto generator :
         {SeparableGenerator::product_fock, SeparableGenerator::product_coherent_spin,
          SeparableGenerator::mixed_product}) {
        const auto samples = witness::sample_separable(generator, seed, per_generator, cutoff);
        double min_ratio = samples.front().ratio;
        for (const auto& s : samples) min_ratio = std::min(min_ratio, s.ratio);
        const char* name =
            generator == SeparableGenerator::product_fock ? "separability_product_fock"
            : generator == SeparableGenerator::product_coherent_spin
                ? "separability_product_coherent_spin"
                : "separability_mixed_product";
        add_result(report, name, 0.5 - min_ratio, 1e-9);
    }
    double worst = 0.0;
    for (int two_j = 1; two_j <= cutoff; ++two_j)
        worst = std::max(worst, std::abs(witness::extremal_product_ratio(two_j, cutoff) - 0.5));
    add_result(report, "separability_extremal_family", worst, 1e-12);
}

void j_bound_suite(SuiteReport& report, std::uint64_t seed, int count) {
    // states drawn at cutoff 3, evaluated with one level of headroom so the
    // operator products act exactly
    const int cutoff = 3;
    const FockBasis basis(4, cutoff);
    const auto ops = stokes::build_fock_operators(cutoff + 1);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const auto state =
            fock::embed(fock::random_state(basis, seed + static_cast<std::uint64_t>(i)), cutoff + 1);
        const auto check = fock::check_j_bound(state, ops);
        worst = std::max(worst, check.lhs - check.rhs);
    }
    add_result(report, "j_bound_random_states", worst, 1e-10);
}

void loss_laws_suite(SuiteReport& report, std::uint64_t seed, int cutoff) {
    // single-arm law on random states (drawn one level below the operator
    // cutoff so that (J^A)^2 acts exactly)
    {
        const int c = 4;
        const auto ops = stokes::build_fock_operators(c);
        const FockBasis basis(4, c - 1);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            const auto state = fock::embed(
                fock::random_state(basis, seed + 100 + static_cast<std::uint64_t>(i)), c);
            const auto rho0 = fock::FockDensity::from_state(state);
            const double j2a = fock::expectation(rho0, ops.ja2);
            const double na = fock::expectation(rho0, ops.na);
            const double eta = 0.7;
            const auto rho = fock::apply_loss_channel(rho0, {eta, eta, 1.0, 1.0});
            const double expected = eta * eta * j2a + 0.75 * eta * (1.0 - eta) * na;
            worst = std::max(worst, rel_diff(fock::expectation(rho, ops.ja2), expected));
        }
        add_result(report, "single_arm_loss_law_random_states", worst, 1e-8);
    }

    // two-arm law on the ideal state
    {
        const double tau = 0.3;
        const int c = std::min(cutoff, 6);
        const auto ops = stokes::build_fock_operators(c);
        const auto rho0 = fock::FockDensity::from_state(fock::build_ideal_state(tau, c));
        const double j2a = fock::expectation(rho0, ops.ja2);
        const double n0 = fock::expectation(rho0, ops.n);
        double worst = 0.0;
        for (const double ea : {0.3, 0.6, 1.0})
            for (const double eb : {0.3, 0.6, 1.0}) {
                const auto transformed = witness::loss_transform_analytic(j2a, n0, ea, eb);
                const auto rho = fock::apply_loss_channel(rho0, {ea, ea, eb, eb});
                worst = std::max(worst, rel_diff(fock::expectation(rho, ops.n), transformed.n));
                const double j2_channel = fock::expectation(rho, ops.j2);
                const double scale = std::max(std::abs(transformed.j2), std::abs(transformed.n));
                worst = std::max(worst, std::abs(j2_channel - transformed.j2) / scale);
            }
        add_result(report, "two_arm_loss_law_ideal_state", worst, 1e-6);
    }

    // channel composition
    {
        const int c = 3;
        const FockBasis basis(4, c);
        const auto rho0 =
            fock::FockDensity::from_state(fock::random_state(basis, seed + 200));
        const std::array<double, 4> eta1 = {0.9, 0.8, 0.7, 0.95};
        const std::array<double, 4> eta2 = {0.5, 0.6, 0.9, 0.85};
        std::array<double, 4> combined{};
        for (int i = 0; i < 4; ++i) combined[i] = eta1[i] * eta2[i];
        const auto sequential = fock::apply_loss_channel(fock::apply_loss_channel(rho0, eta1), eta2);
        const auto direct = fock::apply_loss_channel(rho0, combined);
        const double dev = (sequential.rho - direct.rho).cwiseAbs().maxCoeff();
        add_result(report, "loss_channel_composition", dev, 1e-10);
    }
}

}  // namespace

SuiteReport run_oracle_check(const std::string& suite, std::uint64_t seed, int cutoff,
                             int sample_count) {
    SuiteReport report;
    bool known = false;
    if (suite == "engine_vs_oracle" || suite == "all") {
        engine_vs_oracle_suite(report, cutoff);
        known = true;
    }
    if (suite == "separability" || suite == "all") {
        separability_suite(report, seed, std::min(cutoff, 4), sample_count);
        known = true;
    }
    if (suite == "j_bound" || suite == "all") {
        j_bound_suite(report, seed, std::min(sample_count, 1000));
        known = true;
    }
    if (suite == "loss_laws" || suite == "all") {
        loss_laws_suite(report, seed, cutoff);
        known = true;
    }
    if (!known)
        throw ConfigError("unknown suite '" + suite +
                          "' (use engine_vs_oracle, separability, j_bound, loss_laws or all)");
    return report;
}

}  // namespace entlaser::scenario
