#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epicurve {

enum class ModelKind { SIR, SIRS, SEIR, SEIRS };

std::string_view to_string(ModelKind kind);
/// Accepts "sir", "sirs", "seir", "seirs" (case-insensitive).
std::optional<ModelKind> parse_model_kind(std::string_view name);

bool has_latency(ModelKind kind);
bool has_waning(ModelKind kind);

/// Default latency exit rate: one over the midpoint of a 7-28 day incubation window.
inline constexpr double default_latency_rate = 1.0 / 14.0;
inline constexpr double default_step = 0.05;

/// Rates are per day. `alpha` is required for SEIR/SEIRS, `xi` for SIRS/SEIRS.
struct ModelParams {
    double beta = 0.0;
    double gamma = 0.0;
    std::optional<double> alpha;
    std::optional<double> xi;
    double population = 1.0;
};

/// Throws Error(InvalidParams) if `params` is not usable for `kind`.
void validate(ModelKind kind, const ModelParams& params);

/// Population fractions at time `t` (days). `e` stays 0 for SIR/SIRS.
struct CompartmentState {
    double s = 1.0;
    double e = 0.0;
    double i = 0.0;
    double r = 0.0;
    double t = 0.0;

    double total() const { return s + e + i + r; }
    bool operator==(const CompartmentState&) const = default;
};

inline constexpr double conservation_tolerance = 1e-8;
inline constexpr double conservation_fault_threshold = 1e-6;

/// Throws Error(InvalidState) unless every fraction is in [0, 1] and the total is 1.
void validate(const CompartmentState& state);

/// One infected individual in an otherwise susceptible population.
CompartmentState default_initial_state(double population);

struct Rates {
    double ds = 0.0;
    double de = 0.0;
    double di = 0.0;
    double dr = 0.0;

    double sum() const { return ds + de + di + dr; }
};

Rates derivative(ModelKind kind, const CompartmentState& state, const ModelParams& params);

struct Trajectory {
    ModelKind kind = ModelKind::SIR;
    ModelParams params;
    double step = default_step;
    std::vector<CompartmentState> states;
};

/**
 * Fixed-step classical RK4 integration from `init` over [init.t, init.t + horizon].
 *
 * State k sits at init.t + k * step. When `horizon` is not a multiple of `step`
 * the last step ends at or past the horizon. Each step is checked against the
 * conservation law; a drift above `conservation_fault_threshold` (or any
 * non-finite compartment) raises Error(IntegrationFault).
 */
Trajectory integrate(ModelKind kind, const ModelParams& params, const CompartmentState& init,
                     double horizon, double step = default_step);

/// Cubic Hermite interpolation of the trajectory at time `t` (clamped to its span).
CompartmentState sample(const Trajectory& traj, double t);

double basic_reproduction_number(const ModelParams& params);

struct Peak {
    double day = 0.0;
    double infected = 0.0;
};

/// First global maximum of i(t), refined between grid points by a parabola
/// through the three surrounding samples. Empty when i never rises above its
/// starting value.
std::optional<Peak> peak(const Trajectory& traj);

/// Long-run fixed point of the waning-immunity models. Empty for SIR/SEIR and
/// for waning rate 0.
std::optional<CompartmentState> endemic_equilibrium(ModelKind kind, const ModelParams& params);

/// CSV with header `t,s,e,i,r`, one row per state, 12 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);

} // namespace epicurve
