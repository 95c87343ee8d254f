#include "epicurve/cli.hpp"

#include "epicurve/chart.hpp"
#include "epicurve/epimodel.hpp"
#include "epicurve/error.hpp"
#include "epicurve/fitseries.hpp"
#include "epicurve/ingest.hpp"
#include "epicurve/numfmt.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace epicurve::cli {

namespace {

/// Bad flag values; reported with exit code 1.
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable files; reported with exit code 2.
struct FileFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileFailure("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw FileFailure("error while reading '" + path + "'");
    return buf.str();
}

void emit(const std::string& content, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw FileFailure("cannot open '" + path + "' for writing");
    file << content;
    file.flush();
    if (!file)
        throw FileFailure("error while writing '" + path + "'");
}

double number(const std::string& flag, const std::string& text)
{
    double value = 0.0;
    if (!parse_double(text, value))
        throw UsageFailure(flag + ": '" + text + "' is not a decimal number");
    return value;
}

std::optional<double> optional_number(const std::string& flag, const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    return number(flag, text);
}

std::vector<RegionSeries> load_series(const std::string& path)
{
    const std::string document = read_file(path);
    try {
        return parse_timeseries(document);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

const RegionSeries& select_region(const std::vector<RegionSeries>& all, const std::string& region,
                                  const std::string& path)
{
    if (region.empty()) {
        if (all.size() == 1)
            return all.front();
        if (all.empty())
            throw Error(ErrorKind::NoData, path + ": no data rows");
        throw UsageFailure("--region is required: '" + path + "' holds " + std::to_string(all.size()) +
                           " regions");
    }
    for (const auto& s : all) {
        if (s.region == region)
            return s;
    }
    throw Error(ErrorKind::NoData, path + ": region '" + region + "' not found");
}

struct SimulateArgs {
    std::string model, beta, gamma, alpha, xi, days, step = "0.05", population = "1000000", i0, out;
};

struct FitArgs {
    std::string model, input, region, out, population;
    int horizon = 30;
};

struct StatsArgs {
    std::string input, region, column = "daily_confirmed", out;
};

struct ChartArgs {
    std::string spec, input, out;
};

int simulate(const SimulateArgs& a, std::ostream& out)
{
    const auto kind = parse_model_kind(a.model);
    if (!kind)
        throw UsageFailure("--model must be one of sir, sirs, seir, seirs");

    ModelParams params;
    params.beta = number("--beta", a.beta);
    params.gamma = number("--gamma", a.gamma);
    params.population = number("--population", a.population);
    params.alpha = optional_number("--alpha", a.alpha);
    params.xi = optional_number("--xi", a.xi);
    if (has_latency(*kind) && !params.alpha)
        params.alpha = default_latency_rate;
    if (has_waning(*kind) && !params.xi)
        throw UsageFailure("--xi is required for " + a.model);
    const double days = number("--days", a.days);
    const double step = number("--step", a.step);
    if (!(days > 0))
        throw UsageFailure("--days must be > 0");
    if (!(step > 0 && step <= 1))
        throw UsageFailure("--step must be in (0, 1]");
    try {
        validate(*kind, params);
    } catch (const Error& e) {
        throw UsageFailure(e.what());
    }

    CompartmentState init = default_initial_state(params.population);
    if (const auto i0 = optional_number("--i0", a.i0)) {
        if (!(*i0 > 0 && *i0 < 1))
            throw UsageFailure("--i0 must be in (0, 1)");
        init = {1.0 - *i0, 0.0, *i0, 0.0, 0.0};
    }

    const Trajectory traj = integrate(*kind, params, init, days, step);
    emit(trajectory_to_csv(traj), a.out, out);
    return Success;
}

int fit(const FitArgs& a, std::ostream& out)
{
    if (a.model != "logistic" && a.model != "sir")
        throw UsageFailure("--model must be logistic or sir");
    if (a.horizon <= 0)
        throw UsageFailure("--horizon must be > 0");
    if (a.model == "sir" && a.population.empty())
        throw UsageFailure("--population is required for --model sir");
    const double population = a.model == "sir" ? number("--population", a.population) : 0.0;

    const auto all = load_series(a.input);
    const RegionSeries& series = select_region(all, a.region, a.input);
    const std::vector<double> cumulative = column_values(series, Column::TotalConfirmed);

    Fit result;
    if (a.model == "logistic")
        result = fit_logistic(cumulative);
    else
        result = fit_sir(cumulative, population);
    emit(fit_report_json(result, a.horizon), a.out, out);
    return Success;
}

int stats(const StatsArgs& a, std::ostream& out)
{
    const auto column = parse_column(a.column);
    if (!column)
        throw UsageFailure("--column: unknown column '" + a.column + "'");
    const auto all = load_series(a.input);

    std::vector<std::pair<std::string, SummaryStats>> table;
    if (!a.region.empty() || all.size() == 1) {
        const RegionSeries& series = select_region(all, a.region, a.input);
        for (Column c : all_columns)
            table.emplace_back(std::string(to_string(c)), summary_stats(column_values(series, c)));
    } else {
        if (all.empty())
            throw Error(ErrorKind::NoData, a.input + ": no data rows");
        for (const auto& series : all)
            table.emplace_back(series.region, summary_stats(column_values(series, *column)));
    }
    emit(stats_to_csv(table), a.out, out);
    return Success;
}

ChartSpec load_spec(const std::string& path)
{
    const std::string document = read_file(path);
    try {
        return parse_chart_spec(document);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

int plot(const ChartArgs& a, std::ostream& out, std::ostream& err)
{
    const ChartSpec spec = load_spec(a.spec);
    const auto data = load_series(a.input);
    const RenderResult rendered = render_chart(spec, data);
    emit(rendered.svg, a.out, out);

    std::vector<LintFinding> findings = lint_chart(spec, data);
    for (const auto& note : rendered.notes) {
        if (std::find(findings.begin(), findings.end(), note) == findings.end())
            findings.push_back(note);
    }
    for (const auto& f : findings)
        err << "note: [" << f.rule_id << " " << to_string(f.severity) << "] " << f.subject << ": "
            << f.message << "\n";
    return Success;
}

int lint(const ChartArgs& a, std::ostream& out)
{
    const ChartSpec spec = load_spec(a.spec);
    const auto data = load_series(a.input);
    const auto findings = lint_chart(spec, data);
    out << findings_to_json(findings);
    const bool warned = std::any_of(findings.begin(), findings.end(),
                                    [](const LintFinding& f) { return f.severity == Severity::Warning; });
    return warned ? LintWarnings : Success;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Epidemic curve simulation, fitting, statistics and chart linting", "epicurve"};
    app.require_subcommand(1, 1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a compartmental model; writes t,s,e,i,r CSV");
    simulate_cmd->add_option("--model", sim.model, "sir | sirs | seir | seirs")->required();
    simulate_cmd->add_option("--beta", sim.beta, "transmission rate per day")->required();
    simulate_cmd->add_option("--gamma", sim.gamma, "removal rate per day")->required();
    simulate_cmd->add_option("--alpha", sim.alpha, "latency exit rate per day (seir/seirs, default 1/14)");
    simulate_cmd->add_option("--xi", sim.xi, "immunity waning rate per day (sirs/seirs)");
    simulate_cmd->add_option("--days", sim.days, "horizon in days")->required();
    simulate_cmd->add_option("--step", sim.step, "integration step in days")->capture_default_str();
    simulate_cmd->add_option("--population", sim.population, "population size N")->capture_default_str();
    simulate_cmd->add_option("--i0", sim.i0, "initial infected fraction (default 1/N)");
    simulate_cmd->add_option("--out", sim.out, "output CSV path (default: standard output)");

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a logistic or SIR curve to cumulative confirmed cases");
    fit_cmd->add_option("--model", fa.model, "logistic | sir")->required();
    fit_cmd->add_option("--input", fa.input, "case series CSV or JSON")->required();
    fit_cmd->add_option("--region", fa.region, "region name");
    fit_cmd->add_option("--population", fa.population, "population size N (sir)");
    fit_cmd->add_option("--horizon", fa.horizon, "projection horizon in days")->capture_default_str();
    fit_cmd->add_option("--out", fa.out, "output JSON path (default: standard output)");

    StatsArgs sa;
    auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics table");
    stats_cmd->add_option("--input", sa.input, "case series CSV or JSON")->required();
    stats_cmd->add_option("--region", sa.region, "region name");
    stats_cmd->add_option("--column", sa.column, "column compared across regions")->capture_default_str();
    stats_cmd->add_option("--out", sa.out, "output CSV path (default: standard output)");

    ChartArgs pa;
    auto* plot_cmd = app.add_subcommand("plot", "Render a chart spec to SVG");
    plot_cmd->add_option("--spec", pa.spec, "chart spec JSON")->required();
    plot_cmd->add_option("--input", pa.input, "case series CSV or JSON")->required();
    plot_cmd->add_option("--out", pa.out, "output SVG path (default: standard output)");

    ChartArgs la;
    auto* lint_cmd = app.add_subcommand("lint", "Lint a chart spec; findings JSON on standard output");
    lint_cmd->add_option("--spec", la.spec, "chart spec JSON")->required();
    lint_cmd->add_option("--input", la.input, "case series CSV or JSON")->required();

    std::vector<const char*> argv{"epicurve"};
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return UsageError;
    }

    try {
        if (*simulate_cmd)
            return simulate(sim, out);
        if (*fit_cmd)
            return fit(fa, out);
        if (*stats_cmd)
            return stats(sa, out);
        if (*plot_cmd)
            return plot(pa, out, err);
        return lint(la, out);
    } catch (const UsageFailure& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const FileFailure& e) {
        err << "error: " << e.what() << "\n";
        return DataError;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return DataError;
    }
}

} // namespace epicurve::cli
