#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace epicurve {

/// Three-parameter logistic curve K / (1 + exp(-r (t - t0))).
struct LogisticFit {
    double K = 0.0;
    double r = 0.0;
    double t0 = 0.0;
    double sse = 0.0;
    std::size_t n_points = 0;
};

struct SirFit {
    double beta = 0.0;
    double gamma = 0.0;
    double i0 = 0.0;
    double sse = 0.0;
    double population = 0.0;
    std::size_t n_points = 0;
};

using Fit = std::variant<LogisticFit, SirFit>;

double logistic_value(double K, double r, double t0, double t);

/// SSE of the logistic curve against `series` observed on days 0, 1, ..., n-1.
double logistic_sse(std::span<const double> series, double K, double r, double t0);

/// SSE of N * (i(t) + r(t)) from an SIR integration started at (1 - i0, i0, 0).
/// Returns +inf when the integration itself fails for the given parameters.
double sir_sse(std::span<const double> series, double population, double beta, double gamma,
               double i0);

/// Cumulative SIR cases N * (i + r) on days 0..days-1.
std::vector<double> sir_cumulative(double population, double beta, double gamma, double i0,
                                   std::size_t days);

LogisticFit fit_logistic(std::span<const double> series);
SirFit fit_sir(std::span<const double> series, double population);

double basic_reproduction_number(const SirFit& fit);

/// Fitted model evaluated on the `horizon` days after the last observation.
std::vector<double> project(const Fit& fit, int horizon);

/// JSON report {model, params, sse, n_points, horizon}.
std::string fit_report_json(const Fit& fit, int horizon);

/// Coarse grid that seeds the SIR simplex search.
struct SirGrid {
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> i0;
};

const SirGrid& sir_grid();

} // namespace epicurve
