#include "doctest.h"

#include "oracles.hpp"

#include "epicurve/epimodel.hpp"
#include "epicurve/error.hpp"

#include <cmath>
#include <random>

using namespace epicurve;

namespace {

ModelParams make_params(double beta, double gamma, std::optional<double> alpha = std::nullopt,
                        std::optional<double> xi = std::nullopt, double population = 1e6)
{
    ModelParams p;
    p.beta = beta;
    p.gamma = gamma;
    p.alpha = alpha;
    p.xi = xi;
    p.population = population;
    return p;
}

CompartmentState seeded(double i0)
{
    return {1.0 - i0, 0.0, i0, 0.0, 0.0};
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an epicurve::Error");
    return ErrorKind::NoData;
}

} // namespace

TEST_CASE("derivative: disease-free state has no dynamics")
{
    const auto d = derivative(ModelKind::SIR, {1.0, 0.0, 0.0, 0.0, 0.0}, make_params(0.7, 0.3));
    CHECK(d.ds == 0.0);
    CHECK(d.de == 0.0);
    CHECK(d.di == 0.0);
    CHECK(d.dr == 0.0);
}

TEST_CASE("derivative: SIR substitution")
{
    const auto d = derivative(ModelKind::SIR, {0.9, 0.0, 0.1, 0.0, 0.0}, make_params(0.5, 0.25));
    CHECK(d.ds == doctest::Approx(-0.045).epsilon(1e-12));
    CHECK(d.di == doctest::Approx(0.020).epsilon(1e-12));
    CHECK(d.dr == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(d.de == 0.0);
}

TEST_CASE("derivative: SEIR substitution")
{
    const auto d = derivative(ModelKind::SEIR, {0.9, 0.1, 0.0, 0.0, 0.0}, make_params(0.5, 0.25, 0.2));
    CHECK(d.ds == 0.0);
    CHECK(d.de == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(d.di == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(d.dr == 0.0);
}

TEST_CASE("derivative: waning returns removed individuals to susceptible")
{
    const auto d = derivative(ModelKind::SIRS, {0.5, 0.0, 0.0, 0.5, 0.0}, make_params(0.5, 0.25, {}, 0.1));
    CHECK(d.ds == doctest::Approx(0.05));
    CHECK(d.dr == doctest::Approx(-0.05));
}

TEST_CASE("derivative: missing parameters are rejected")
{
    CHECK(kind_of([] { derivative(ModelKind::SEIR, seeded(0.1), make_params(0.5, 0.25)); }) ==
          ErrorKind::InvalidParams);
    CHECK(kind_of([] { derivative(ModelKind::SIRS, seeded(0.1), make_params(0.5, 0.25)); }) ==
          ErrorKind::InvalidParams);
    CHECK(kind_of([] { derivative(ModelKind::SEIRS, seeded(0.1), make_params(0.5, 0.25, 0.2)); }) ==
          ErrorKind::InvalidParams);
    CHECK(kind_of([] { derivative(ModelKind::SIR, seeded(0.1), make_params(0.0, 0.25)); }) ==
          ErrorKind::InvalidParams);
    CHECK(kind_of([] { derivative(ModelKind::SIR, seeded(0.1), make_params(0.5, NAN)); }) ==
          ErrorKind::InvalidParams);
}

TEST_CASE("derivative: rate components sum to zero for every model")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        double parts[4] = {u(rng), u(rng), u(rng), u(rng)};
        const double total = parts[0] + parts[1] + parts[2] + parts[3];
        CompartmentState x{parts[0] / total, parts[1] / total, parts[2] / total, parts[3] / total, 0.0};
        const auto p = make_params(2 * u(rng) + 1e-3, u(rng) + 1e-3, 5 * u(rng) + 1e-3, u(rng));
        for (auto kind : {ModelKind::SIR, ModelKind::SIRS, ModelKind::SEIR, ModelKind::SEIRS}) {
            CompartmentState y = x;
            if (!has_latency(kind)) {
                y.s += y.e;
                y.e = 0;
            }
            CHECK(std::abs(derivative(kind, y, p).sum()) <= 1e-12);
        }
    }
}

TEST_CASE("integrate: disease-free start stays constant")
{
    const CompartmentState init{1.0, 0.0, 0.0, 0.0, 0.0};
    for (auto kind : {ModelKind::SIR, ModelKind::SIRS, ModelKind::SEIR, ModelKind::SEIRS}) {
        const auto traj = integrate(kind, make_params(0.5, 0.25, 0.2, 0.01), init, 50);
        for (const auto& x : traj.states) {
            CHECK(x.s == 1.0);
            CHECK(x.e == 0.0);
            CHECK(x.i == 0.0);
            CHECK(x.r == 0.0);
        }
    }
}

TEST_CASE("integrate: time grid, determinism, and validation")
{
    const auto p = make_params(0.5, 0.25);
    const auto a = integrate(ModelKind::SIR, p, seeded(1e-4), 10, 0.05);
    REQUIRE(a.states.size() == 201);
    CHECK(a.states.back().t == doctest::Approx(10.0));
    for (std::size_t k = 1; k < a.states.size(); ++k)
        CHECK(a.states[k].t > a.states[k - 1].t);

    const auto b = integrate(ModelKind::SIR, p, seeded(1e-4), 10, 0.05);
    CHECK(a.states == b.states);

    CHECK(kind_of([&] { integrate(ModelKind::SIR, p, {0.5, 0.0, 0.1, 0.0, 0.0}, 10); }) ==
          ErrorKind::InvalidState);
    CHECK(kind_of([&] { integrate(ModelKind::SIR, p, {1.2, 0.0, -0.2, 0.0, 0.0}, 10); }) ==
          ErrorKind::InvalidState);
    CHECK(kind_of([&] { integrate(ModelKind::SIR, p, seeded(0.1), 0.0); }) == ErrorKind::InvalidParams);
    CHECK(kind_of([&] { integrate(ModelKind::SIR, p, seeded(0.1), 10, 1.5); }) == ErrorKind::InvalidParams);
    CHECK(kind_of([&] { integrate(ModelKind::SIR, p, seeded(0.1), 10, 0.0); }) == ErrorKind::InvalidParams);
}

TEST_CASE("integrate: runaway integration is reported as a fault")
{
    // alpha * step far outside the RK4 stability region blows up the exposed compartment.
    const auto p = make_params(0.5, 0.25, 500.0);
    CHECK(kind_of([&] { integrate(ModelKind::SEIR, p, {0.9, 0.1, 0.0, 0.0, 0.0}, 100, 1.0); }) ==
          ErrorKind::IntegrationFault);
}

TEST_CASE("integrate: final size matches the conserved-quantity oracle")
{
    for (double beta : {0.3, 0.5, 0.9}) {
        const auto p = make_params(beta, 0.1);
        const double i0 = 1e-4;
        const auto traj = integrate(ModelKind::SIR, p, seeded(i0), 800);
        const double expected = oracle::sir_final_size(beta / 0.1, 1 - i0);
        CHECK(traj.states.back().r == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("integrate: compartments stay within [0, 1] and conserve mass")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rate(0.02, 1.0);
    std::uniform_real_distribution<double> waning(0.0, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = make_params(rate(rng), rate(rng), rate(rng), waning(rng));
        const ModelKind kind = static_cast<ModelKind>(trial % 4);
        const auto traj = integrate(kind, p, seeded(1e-3), 300, 0.1);
        for (const auto& x : traj.states) {
            REQUIRE(std::abs(x.total() - 1.0) <= conservation_tolerance);
            for (double f : {x.s, x.e, x.i, x.r}) {
                CHECK(f >= 0.0);
                CHECK(f <= 1.0);
            }
        }
    }
}

TEST_CASE("integrate: halving the step barely moves the final removed fraction")
{
    const auto p = make_params(0.5, 0.25);
    const auto coarse = integrate(ModelKind::SIR, p, seeded(1e-4), 200, 0.05);
    const auto fine = integrate(ModelKind::SIR, p, seeded(1e-4), 200, 0.025);
    CHECK(std::abs(coarse.states.back().r - fine.states.back().r) <= 1e-5);
}

TEST_CASE("integrate: higher R0 leaves a strictly larger final removed fraction")
{
    const double gamma = 0.1;
    const auto high = integrate(ModelKind::SIR, make_params(2.73 * gamma, gamma), seeded(1e-5), 365);
    const auto low = integrate(ModelKind::SIR, make_params(1.99 * gamma, gamma), seeded(1e-5), 365);
    CHECK(high.states.back().r > low.states.back().r);
    // Neither epidemic infects the whole population.
    CHECK(high.states.back().r < 1.0);
}

TEST_CASE("basic reproduction number")
{
    CHECK(basic_reproduction_number(make_params(0.5, 0.25)) == 2.0);
    CHECK(basic_reproduction_number(make_params(0.3, 0.3)) == 1.0);
    CHECK(basic_reproduction_number(make_params(0.273, 0.1)) == doctest::Approx(2.73).epsilon(1e-15));
    CHECK(kind_of([] { basic_reproduction_number(make_params(0.5, 0.0)); }) == ErrorKind::InvalidParams);
    CHECK(kind_of([] { basic_reproduction_number(make_params(0.5, -1.0)); }) == ErrorKind::InvalidParams);
}

TEST_CASE("peak: none for a disease-free or sub-threshold trajectory")
{
    const auto flat = integrate(ModelKind::SIR, make_params(0.5, 0.25), {1, 0, 0, 0, 0}, 50);
    CHECK_FALSE(peak(flat).has_value());
    const auto decay = integrate(ModelKind::SIR, make_params(0.2, 0.25), seeded(1e-3), 200);
    CHECK_FALSE(peak(decay).has_value());
    for (std::size_t k = 1; k < decay.states.size(); ++k)
        CHECK(decay.states[k].i <= decay.states[k - 1].i);
}

TEST_CASE("peak: susceptible fraction at the peak is 1/R0")
{
    const auto p = make_params(0.5, 0.25);
    const double i0 = 1e-4;
    const auto traj = integrate(ModelKind::SIR, p, seeded(i0), 300);
    const auto pk = peak(traj);
    REQUIRE(pk.has_value());
    CHECK(std::abs(sample(traj, pk->day).s - 0.5) <= 1e-3);
    CHECK(pk->infected == doctest::Approx(oracle::sir_peak_infected(2.0, 1 - i0, i0)).epsilon(1e-6));

    // Finer step agrees on the peak day.
    const auto fine = integrate(ModelKind::SIR, p, seeded(i0), 300, 0.025);
    CHECK(peak(fine)->day == doctest::Approx(pk->day).epsilon(1e-4));
}

TEST_CASE("peak: SEIR epidemic starting from exposed only still peaks")
{
    const auto traj = integrate(ModelKind::SEIR, make_params(0.5, 0.25, 0.2), {0.999, 0.001, 0, 0, 0}, 300);
    CHECK(peak(traj).has_value());
}

TEST_CASE("SEIR with very fast latency approaches SIR")
{
    const auto sir = integrate(ModelKind::SIR, make_params(0.5, 0.25), seeded(1e-3), 200);
    const auto seir = integrate(ModelKind::SEIR, make_params(0.5, 0.25, 50.0), seeded(1e-3), 200);
    REQUIRE(sir.states.size() == seir.states.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < sir.states.size(); ++k)
        worst = std::max(worst, std::abs(sir.states[k].i - seir.states[k].i));
    CHECK(worst <= 1e-2);
}

TEST_CASE("endemic equilibrium")
{
    CHECK_FALSE(endemic_equilibrium(ModelKind::SIR, make_params(0.5, 0.25)).has_value());
    CHECK_FALSE(endemic_equilibrium(ModelKind::SEIR, make_params(0.5, 0.25, 0.2)).has_value());

    const auto sub = endemic_equilibrium(ModelKind::SIRS, make_params(0.2, 0.25, {}, 0.01));
    REQUIRE(sub.has_value());
    CHECK(sub->s == 1.0);
    CHECK(sub->i == 0.0);

    const auto p = make_params(0.2, 0.1, {}, 0.01);
    const auto eq = endemic_equilibrium(ModelKind::SIRS, p);
    REQUIRE(eq.has_value());
    CHECK(eq->s == doctest::Approx(0.5));
    CHECK(eq->i == doctest::Approx(0.5 / 11.0).epsilon(1e-12));
    CHECK(eq->total() == doctest::Approx(1.0).epsilon(1e-15));
    const auto d = derivative(ModelKind::SIRS, *eq, p);
    CHECK(std::abs(d.ds) < 1e-15);
    CHECK(std::abs(d.di) < 1e-15);

    const auto traj = integrate(ModelKind::SIRS, p, default_initial_state(1e6), 2000);
    CHECK(std::abs(traj.states.back().i - eq->i) <= 1e-4);
}

TEST_CASE("endemic equilibrium: SEIRS fixed point is stationary and attracting")
{
    const auto p = make_params(0.3, 0.1, 0.2, 0.02);
    const auto eq = endemic_equilibrium(ModelKind::SEIRS, p);
    REQUIRE(eq.has_value());
    const auto d = derivative(ModelKind::SEIRS, *eq, p);
    CHECK(std::abs(d.ds) < 1e-14);
    CHECK(std::abs(d.de) < 1e-14);
    CHECK(std::abs(d.di) < 1e-14);
    CHECK(std::abs(d.dr) < 1e-14);
    const auto traj = integrate(ModelKind::SEIRS, p, default_initial_state(1e6), 3000);
    CHECK(std::abs(traj.states.back().i - eq->i) <= 1e-4);
    CHECK(std::abs(traj.states.back().e - eq->e) <= 1e-4);
}

TEST_CASE("trajectory CSV export")
{
    const auto traj = integrate(ModelKind::SIR, make_params(0.5, 0.25), seeded(0.01), 0.1, 0.05);
    const std::string csv = trajectory_to_csv(traj);
    CHECK(csv.rfind("t,s,e,i,r\n0,0.99,0,0.01,0\n0.05,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("model kind names")
{
    CHECK(parse_model_kind("SEIRS") == ModelKind::SEIRS);
    CHECK(parse_model_kind("sir") == ModelKind::SIR);
    CHECK_FALSE(parse_model_kind("siqr").has_value());
    CHECK(to_string(ModelKind::SEIR) == "seir");
}
