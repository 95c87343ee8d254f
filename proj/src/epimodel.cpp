#include "epicurve/epimodel.hpp"

#include "epicurve/error.hpp"
#include "epicurve/numfmt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace epicurve {

namespace {

std::string describe(ModelKind kind)
{
    return std::string(to_string(kind));
}

Rates rates(ModelKind kind, const CompartmentState& x, const ModelParams& params)
{
    const double infection = params.beta * x.s * x.i;
    const double removal = params.gamma * x.i;
    const double waning = has_waning(kind) ? *params.xi * x.r : 0.0;

    Rates d;
    d.ds = -infection + waning;
    if (has_latency(kind)) {
        const double onset = *params.alpha * x.e;
        d.de = infection - onset;
        d.di = onset - removal;
    } else {
        d.di = infection - removal;
    }
    d.dr = removal - waning;
    return d;
}

CompartmentState advance(const CompartmentState& x, const Rates& k, double h)
{
    return {x.s + h * k.ds, x.e + h * k.de, x.i + h * k.di, x.r + h * k.dr, x.t + h};
}

CompartmentState rk4_step(ModelKind kind, const ModelParams& params, const CompartmentState& x,
                          double h)
{
    const Rates k1 = rates(kind, x, params);
    const Rates k2 = rates(kind, advance(x, k1, h / 2), params);
    const Rates k3 = rates(kind, advance(x, k2, h / 2), params);
    const Rates k4 = rates(kind, advance(x, k3, h), params);
    const double w = h / 6.0;
    CompartmentState next;
    next.s = x.s + w * (k1.ds + 2 * k2.ds + 2 * k3.ds + k4.ds);
    next.e = x.e + w * (k1.de + 2 * k2.de + 2 * k3.de + k4.de);
    next.i = x.i + w * (k1.di + 2 * k2.di + 2 * k3.di + k4.di);
    next.r = x.r + w * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr);
    return next;
}

bool all_finite(const CompartmentState& x)
{
    return std::isfinite(x.s) && std::isfinite(x.e) && std::isfinite(x.i) && std::isfinite(x.r);
}

} // namespace

std::string_view to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::SIR: return "sir";
    case ModelKind::SIRS: return "sirs";
    case ModelKind::SEIR: return "seir";
    case ModelKind::SEIRS: return "seirs";
    }
    return "sir";
}

std::optional<ModelKind> parse_model_kind(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sir")
        return ModelKind::SIR;
    if (lower == "sirs")
        return ModelKind::SIRS;
    if (lower == "seir")
        return ModelKind::SEIR;
    if (lower == "seirs")
        return ModelKind::SEIRS;
    return std::nullopt;
}

bool has_latency(ModelKind kind)
{
    return kind == ModelKind::SEIR || kind == ModelKind::SEIRS;
}

bool has_waning(ModelKind kind)
{
    return kind == ModelKind::SIRS || kind == ModelKind::SEIRS;
}

void validate(ModelKind kind, const ModelParams& params)
{
    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::InvalidParams, describe(kind) + ": " + what);
    };
    if (!std::isfinite(params.beta) || params.beta <= 0)
        fail("beta must be finite and > 0");
    if (!std::isfinite(params.gamma) || params.gamma <= 0)
        fail("gamma must be finite and > 0");
    if (!std::isfinite(params.population) || params.population < 1)
        fail("population must be >= 1");
    if (has_latency(kind)) {
        if (!params.alpha)
            fail("alpha (latency exit rate) is required");
        if (!std::isfinite(*params.alpha) || *params.alpha <= 0)
            fail("alpha must be finite and > 0");
    }
    if (has_waning(kind)) {
        if (!params.xi)
            fail("xi (immunity waning rate) is required");
        if (!std::isfinite(*params.xi) || *params.xi < 0)
            fail("xi must be finite and >= 0");
    }
}

void validate(const CompartmentState& state)
{
    for (double f : {state.s, state.e, state.i, state.r}) {
        if (!std::isfinite(f) || f < 0.0 || f > 1.0)
            throw Error(ErrorKind::InvalidState, "compartment fraction outside [0, 1]");
    }
    if (std::abs(state.total() - 1.0) > conservation_tolerance)
        throw Error(ErrorKind::InvalidState, "compartment fractions do not sum to 1");
    if (!std::isfinite(state.t))
        throw Error(ErrorKind::InvalidState, "non-finite start time");
}

CompartmentState default_initial_state(double population)
{
    if (!std::isfinite(population) || population < 1)
        throw Error(ErrorKind::InvalidParams, "population must be >= 1");
    const double i0 = 1.0 / population;
    return {1.0 - i0, 0.0, i0, 0.0, 0.0};
}

Rates derivative(ModelKind kind, const CompartmentState& x, const ModelParams& params)
{
    validate(kind, params);
    return rates(kind, x, params);
}

Trajectory integrate(ModelKind kind, const ModelParams& params, const CompartmentState& init,
                     double horizon, double step)
{
    validate(kind, params);
    validate(init);
    if (!std::isfinite(horizon) || horizon <= 0)
        throw Error(ErrorKind::InvalidParams, "horizon must be > 0");
    if (!std::isfinite(step) || step <= 0 || step > 1)
        throw Error(ErrorKind::InvalidParams, "step must be in (0, 1]");
    if (!has_latency(kind) && init.e != 0.0)
        throw Error(ErrorKind::InvalidState, "exposed fraction must be 0 for " + describe(kind));

    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));

    Trajectory traj{kind, params, step, {}};
    traj.states.reserve(steps + 1);
    traj.states.push_back(init);

    CompartmentState x = init;
    for (std::size_t k = 1; k <= steps; ++k) {
        x = rk4_step(kind, params, x, step);
        x.t = init.t + static_cast<double>(k) * step;
        const double drift = std::abs(x.total() - 1.0);
        if (!all_finite(x) || !(drift <= conservation_fault_threshold)) {
            std::ostringstream msg;
            msg << "conservation check failed at t=" << format_general(x.t)
                << " (|s+e+i+r-1| = " << format_general(drift, 3) << ")";
            throw Error(ErrorKind::IntegrationFault, msg.str());
        }
        traj.states.push_back(x);
    }
    return traj;
}

CompartmentState sample(const Trajectory& traj, double t)
{
    if (traj.states.empty())
        throw Error(ErrorKind::NoData, "empty trajectory");
    const auto& states = traj.states;
    const double t0 = states.front().t;
    if (t <= t0)
        return states.front();
    if (t >= states.back().t)
        return states.back();

    const double pos = (t - t0) / traj.step;
    auto k = static_cast<std::size_t>(std::floor(pos));
    k = std::min(k, states.size() - 2);
    const CompartmentState& a = states[k];
    const CompartmentState& b = states[k + 1];
    const double h = b.t - a.t;
    const double u = (t - a.t) / h;
    if (u <= 0.0)
        return a;

    const Rates da = derivative(traj.kind, a, traj.params);
    const Rates db = derivative(traj.kind, b, traj.params);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    auto blend = [&](double ya, double yb, double ma, double mb) {
        return h00 * ya + h10 * h * ma + h01 * yb + h11 * h * mb;
    };
    return {blend(a.s, b.s, da.ds, db.ds), blend(a.e, b.e, da.de, db.de),
            blend(a.i, b.i, da.di, db.di), blend(a.r, b.r, da.dr, db.dr), t};
}

double basic_reproduction_number(const ModelParams& params)
{
    if (!(params.gamma > 0) || !std::isfinite(params.gamma))
        throw Error(ErrorKind::InvalidParams, "gamma must be > 0");
    return params.beta / params.gamma;
}

std::optional<Peak> peak(const Trajectory& traj)
{
    const auto& states = traj.states;
    if (states.empty())
        return std::nullopt;

    std::size_t best = 0;
    for (std::size_t k = 1; k < states.size(); ++k) {
        if (states[k].i > states[best].i)
            best = k;
    }
    if (best == 0)
        return std::nullopt;

    Peak p{states[best].t, states[best].i};
    if (best + 1 < states.size()) {
        const double left = states[best - 1].i;
        const double mid = states[best].i;
        const double right = states[best + 1].i;
        const double curvature = left - 2 * mid + right;
        if (curvature < 0) {
            const double offset = 0.5 * (left - right) / curvature;
            p.day = states[best].t + offset * traj.step;
            p.infected = mid - (left - right) * (left - right) / (8 * curvature);
        }
    }
    return p;
}

std::optional<CompartmentState> endemic_equilibrium(ModelKind kind, const ModelParams& params)
{
    validate(kind, params);
    if (!has_waning(kind) || *params.xi == 0.0)
        return std::nullopt;

    const double r0 = basic_reproduction_number(params);
    if (r0 <= 1.0)
        return CompartmentState{1.0, 0.0, 0.0, 0.0, 0.0};

    // At the fixed point every flow balances: beta*s*i = alpha*e = gamma*i = xi*r.
    const double s = 1.0 / r0;
    double weight = 1.0 + params.gamma / *params.xi;
    if (has_latency(kind))
        weight += params.gamma / *params.alpha;
    const double i = (1.0 - s) / weight;
    const double e = has_latency(kind) ? params.gamma * i / *params.alpha : 0.0;
    const double r = 1.0 - s - e - i;
    return CompartmentState{s, e, i, r, 0.0};
}

std::string trajectory_to_csv(const Trajectory& traj)
{
    std::string out = "t,s,e,i,r\n";
    for (const auto& x : traj.states) {
        out += format_general(x.t);
        for (double v : {x.s, x.e, x.i, x.r}) {
            out += ',';
            out += format_general(v);
        }
        out += '\n';
    }
    return out;
}

} // namespace epicurve
