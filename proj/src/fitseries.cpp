#include "epicurve/fitseries.hpp"

#include "epicurve/epimodel.hpp"
#include "epicurve/error.hpp"
#include "epicurve/simplex.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace epicurve {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();
constexpr int max_polish_rounds = 5;

void require_non_decreasing(std::span<const double> series)
{
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (!std::isfinite(series[k]) || series[k] < 0)
            throw Error(ErrorKind::InvalidParams, "series values must be finite and >= 0");
        if (k > 0 && series[k] < series[k - 1])
            throw Error(ErrorKind::InvalidParams,
                        "cumulative series must be non-decreasing (day " + std::to_string(k) + ")");
    }
}

double logit(double p)
{
    return std::log(p / (1.0 - p));
}

double inverse_logit(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

/// Restarts the simplex from its own optimum until a restart no longer improves it.
SimplexResult polish(const Objective& objective, SimplexResult best, const std::vector<double>& steps)
{
    for (int round = 0; round < max_polish_rounds; ++round) {
        SimplexResult again = minimize_simplex(objective, best.point, steps);
        if (!(again.value < best.value))
            break;
        best = std::move(again);
    }
    return best;
}

/// State index for day `day`, or -1 when the day is not on the step grid.
long grid_index(const Trajectory& traj, double day)
{
    const double pos = (day - traj.states.front().t) / traj.step;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) > 1e-6 || nearest < 0 ||
        nearest >= static_cast<double>(traj.states.size()))
        return -1;
    return static_cast<long>(nearest);
}

CompartmentState state_on_day(const Trajectory& traj, double day)
{
    const long k = grid_index(traj, day);
    return k >= 0 ? traj.states[static_cast<std::size_t>(k)] : sample(traj, day);
}

Trajectory sir_run(double population, double beta, double gamma, double i0, double horizon)
{
    ModelParams params;
    params.beta = beta;
    params.gamma = gamma;
    params.population = population;
    const CompartmentState init{1.0 - i0, 0.0, i0, 0.0, 0.0};
    return integrate(ModelKind::SIR, params, init, horizon);
}

} // namespace

double logistic_value(double K, double r, double t0, double t)
{
    return K / (1.0 + std::exp(-r * (t - t0)));
}

double logistic_sse(std::span<const double> series, double K, double r, double t0)
{
    double sse = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double residual = series[k] - logistic_value(K, r, t0, static_cast<double>(k));
        sse += residual * residual;
    }
    return sse;
}

std::vector<double> sir_cumulative(double population, double beta, double gamma, double i0,
                                   std::size_t days)
{
    if (days == 0)
        return {};
    const double horizon = std::max(1.0, static_cast<double>(days - 1));
    const Trajectory traj = sir_run(population, beta, gamma, i0, horizon);
    std::vector<double> out(days);
    for (std::size_t d = 0; d < days; ++d) {
        const CompartmentState x = state_on_day(traj, static_cast<double>(d));
        out[d] = population * (x.i + x.r);
    }
    return out;
}

double sir_sse(std::span<const double> series, double population, double beta, double gamma,
               double i0)
{
    std::vector<double> model;
    try {
        model = sir_cumulative(population, beta, gamma, i0, series.size());
    } catch (const Error&) {
        return infinity;
    }
    double sse = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double residual = series[k] - model[k];
        sse += residual * residual;
    }
    return std::isfinite(sse) ? sse : infinity;
}

LogisticFit fit_logistic(std::span<const double> series)
{
    if (series.size() < 5)
        throw Error(ErrorKind::InsufficientData, "logistic fit needs at least 5 points");
    require_non_decreasing(series);
    const double peak = series.back();
    if (!(peak > 0) || series.front() == peak)
        throw Error(ErrorKind::DegenerateSeries, "logistic fit needs a growing series");

    const auto n = static_cast<double>(series.size());

    // Search coordinates: log(K - max), log(r), t0. K therefore never drops below max.
    auto decode = [peak](const std::vector<double>& x) {
        return std::array<double, 3>{peak + std::exp(x[0]), std::exp(x[1]), x[2]};
    };
    const Objective objective = [&](const std::vector<double>& x) {
        const auto [K, r, t0] = decode(x);
        const double sse = logistic_sse(series, K, r, t0);
        return std::isfinite(sse) ? sse : infinity;
    };

    double half_day = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k] >= peak / 2) {
            half_day = static_cast<double>(k);
            break;
        }
    }

    const std::vector<double> steps{0.5, 0.2, std::max(1.0, n / 20)};
    std::optional<SimplexResult> best;
    for (double excess : {0.1, 1.0, 4.0}) {
        for (double rate : {0.05, 0.1, 0.2, 0.5}) {
            for (double t0 : {half_day, n - 1}) {
                const std::vector<double> start{std::log(excess * peak), std::log(rate), t0};
                SimplexResult run = minimize_simplex(objective, start, steps);
                if (!best || run.value < best->value)
                    best = std::move(run);
            }
        }
    }
    const SimplexResult result = polish(objective, *best, steps);

    const auto [K, r, t0] = decode(result.point);
    return LogisticFit{K, r, t0, result.value, series.size()};
}

const SirGrid& sir_grid()
{
    static const SirGrid grid = [] {
        SirGrid g;
        for (int k = 1; k <= 20; ++k)
            g.beta.push_back(0.05 * k);
        for (int k = 1; k <= 25; ++k)
            g.gamma.push_back(0.02 * k);
        g.i0 = {1e-6, 1e-5, 1e-4};
        return g;
    }();
    return grid;
}

SirFit fit_sir(std::span<const double> series, double population)
{
    if (series.size() < 10)
        throw Error(ErrorKind::InsufficientData, "SIR fit needs at least 10 points");
    require_non_decreasing(series);
    if (!std::isfinite(population) || population < 1 || population < series.back())
        throw Error(ErrorKind::InvalidParams, "population must be >= the largest cumulative count");

    // Lexicographic scan; strict comparison keeps the first minimizer.
    const SirGrid& grid = sir_grid();
    double best_sse = infinity;
    std::array<double, 3> seed{grid.beta.front(), grid.gamma.front(), grid.i0.front()};
    for (double beta : grid.beta) {
        for (double gamma : grid.gamma) {
            for (double i0 : grid.i0) {
                const double sse = sir_sse(series, population, beta, gamma, i0);
                if (sse < best_sse) {
                    best_sse = sse;
                    seed = {beta, gamma, i0};
                }
            }
        }
    }

    // Search coordinates: log(beta), log(gamma), logit(i0).
    const Objective objective = [&](const std::vector<double>& x) {
        const double i0 = inverse_logit(x[2]);
        if (!(i0 > 0.0 && i0 < 1.0))
            return infinity;
        return sir_sse(series, population, std::exp(x[0]), std::exp(x[1]), i0);
    };
    const std::vector<double> start{std::log(seed[0]), std::log(seed[1]), logit(seed[2])};
    const std::vector<double> steps{0.1, 0.1, 0.5};
    SimplexResult result = polish(objective, minimize_simplex(objective, start, steps), steps);

    if (!(result.value <= best_sse)) {
        result.point = start;
        result.value = best_sse;
    }
    return SirFit{std::exp(result.point[0]), std::exp(result.point[1]),
                  inverse_logit(result.point[2]), result.value, population, series.size()};
}

double basic_reproduction_number(const SirFit& fit)
{
    if (!(fit.gamma > 0))
        throw Error(ErrorKind::InvalidParams, "gamma must be > 0");
    return fit.beta / fit.gamma;
}

std::vector<double> project(const Fit& fit, int horizon)
{
    if (horizon <= 0)
        throw Error(ErrorKind::InvalidParams, "horizon must be > 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));

    if (const auto* logistic = std::get_if<LogisticFit>(&fit)) {
        const auto first = static_cast<double>(logistic->n_points);
        for (int d = 0; d < horizon; ++d)
            out.push_back(logistic_value(logistic->K, logistic->r, logistic->t0, first + d));
        return out;
    }

    const auto& sir = std::get<SirFit>(fit);
    const std::size_t total = sir.n_points + static_cast<std::size_t>(horizon);
    const std::vector<double> all = sir_cumulative(sir.population, sir.beta, sir.gamma, sir.i0, total);
    out.assign(all.begin() + static_cast<std::ptrdiff_t>(sir.n_points), all.end());
    return out;
}

std::string fit_report_json(const Fit& fit, int horizon)
{
    nlohmann::ordered_json report;
    if (const auto* logistic = std::get_if<LogisticFit>(&fit)) {
        report["model"] = "logistic";
        report["params"] = {{"K", logistic->K}, {"r", logistic->r}, {"t0", logistic->t0}};
        report["sse"] = logistic->sse;
        report["n_points"] = logistic->n_points;
    } else {
        const auto& sir = std::get<SirFit>(fit);
        report["model"] = "sir";
        report["params"] = {{"beta", sir.beta},
                            {"gamma", sir.gamma},
                            {"i0", sir.i0},
                            {"population", sir.population}};
        report["sse"] = sir.sse;
        report["n_points"] = sir.n_points;
    }
    report["horizon"] = horizon;
    return report.dump(2) + "\n";
}

} // namespace epicurve
