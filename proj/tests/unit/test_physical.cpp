#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sedsphere/ide.hpp"
#include "sedsphere/physical.hpp"

using namespace sedsphere;
using namespace sedsphere::physical;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// glycerol-like fluid, plastic bead
PhysicalParams bead() { return {1190.0, 1000.0, 0.1, 0.001, 9.8}; }

Trajectory uniform(double h, int n, double (*u)(double), double (*du)(double)) {
    Trajectory traj;
    traj.meta.step = h;
    for (int i = 0; i <= n; ++i) {
        const double t = h * i;
        traj.push_back(t, u(t), du(t));
    }
    return traj;
}

} // namespace

TEST_CASE("validate", "[physical]") {
    CHECK_NOTHROW(validate(bead()));
    auto p = bead();
    p.rho = 0.0;
    CHECK_THROWS_AS(validate(p), std::domain_error);
    p = bead();
    p.mu = -1.0;
    CHECK_THROWS_AS(validate(p), std::domain_error);
    p = bead();
    p.R = 0.0;
    CHECK_THROWS_AS(validate(p), std::domain_error);
    p = bead();
    p.g = 0.0;
    CHECK_THROWS_AS(validate(p), std::domain_error);
    p = bead();
    p.rho_s = -1.0;
    CHECK_THROWS_AS(validate(p), std::domain_error);
    p = bead();
    p.rho_s = 0.0;
    CHECK_NOTHROW(validate(p));
    p = bead();
    p.mu = NAN;
    CHECK_THROWS_AS(stokes_terminal_velocity(p), std::domain_error);
    CHECK_THAT(bead().kinematic_viscosity(), WithinRel(1e-4, 1e-15));
}

TEST_CASE("stokes_terminal_velocity", "[physical]") {
    auto p = bead();
    // 2 * 190 * 9.8 * 1e-6 / 0.9, mpmath
    CHECK_THAT(stokes_terminal_velocity(p), WithinRel(0.0041377777777777777778, 1e-14));
    p.rho_s = p.rho;
    CHECK(stokes_terminal_velocity(p) == 0.0);
    p = bead();
    const double u = stokes_terminal_velocity(p);
    p.R *= 2.0;
    CHECK_THAT(stokes_terminal_velocity(p), WithinRel(4.0 * u, 1e-15));
    p = bead();
    p.rho_s = 900.0;
    CHECK(stokes_terminal_velocity(p) < 0.0);
}

TEST_CASE("nondimensionalize", "[physical]") {
    auto p = bead();
    const auto g = nondimensionalize(p);
    CHECK_THAT(g.kappa, WithinRel(pi * g.Q * g.Q / g.B, 1e-14));
    CHECK_THAT(g.U0, WithinRel(stokes_terminal_velocity(p), 1e-14));
    CHECK_THAT(g.U0, WithinRel(g.M / g.B, 1e-15));
    CHECK_THAT(g.kappa, WithinRel(9.0 * 1000.0 / (2.0 * 1190.0 + 1000.0), 1e-14));

    p.rho_s = p.rho;
    const auto neutral = nondimensionalize(p);
    CHECK_THAT(neutral.kappa, WithinRel(3.0, 1e-14));
    CHECK(neutral.U0 == 0.0);

    p.rho_s = 0.0;
    CHECK_THAT(nondimensionalize(p).kappa, WithinRel(9.0, 1e-14));
    p.rho_s = 1e9;
    CHECK(nondimensionalize(p).kappa < 1e-5);
}

TEST_CASE("kappa range and the falling-sphere criterion", "[physical][property]") {
    for (double rho_s : {0.0, 10.0, 500.0, 999.0, 1001.0, 2500.0, 8000.0, 1e6}) {
        for (double mu : {1e-3, 1.0}) {
            for (double R : {1e-5, 1e-2}) {
                const PhysicalParams p{rho_s, 1000.0, mu, R, 9.81};
                const auto g = nondimensionalize(p);
                CHECK(g.kappa > 0.0);
                CHECK(g.kappa <= 9.0);
                CHECK((g.kappa < 3.0) == (rho_s > 1000.0));
                CHECK(std::abs(g.kappa - pi * g.Q * g.Q / g.B) <= 1e-14 * g.kappa);
            }
        }
    }
}

TEST_CASE("oscillatory_drag", "[physical]") {
    const auto p = bead();
    CHECK(oscillatory_drag(p, 0.0, 0.0, 2.0) == 0.0);
    // 6 pi mu R (1 + R/delta) U0 at omega = 1, mpmath
    CHECK_THAT(oscillatory_drag(p, stokes_terminal_velocity(p), 0.0, 1.0), WithinRel(8.3510372300356518768e-6, 1e-13));

    // the acceleration coefficient is 3 pi R^2 rho delta + (2/3) pi R^3 rho
    auto delta = [&](double omega) {
        const double c = oscillatory_drag(p, 0.0, 1.0, omega);
        return (c - 2.0 / 3.0 * pi * std::pow(p.R, 3) * p.rho) / (3.0 * pi * p.R * p.R * p.rho);
    };
    CHECK_THAT(delta(1.0), WithinRel(std::sqrt(2.0 * p.kinematic_viscosity()), 1e-12));
    CHECK_THAT(delta(4.0), WithinRel(0.5 * delta(1.0), 1e-12));

    CHECK_THROWS_AS(oscillatory_drag(p, 1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(oscillatory_drag(p, 1.0, 0.0, -3.0), std::domain_error);
}

TEST_CASE("oscillatory_drag is linear", "[physical][property]") {
    const auto p = bead();
    const double a = 0.7, b = -2.3, w = 3.0;
    const double u1 = 1e-3, d1 = 0.2, u2 = -4e-3, d2 = 0.05;
    const double lhs = oscillatory_drag(p, a * u1 + b * u2, a * d1 + b * d2, w);
    const double rhs = a * oscillatory_drag(p, u1, d1, w) + b * oscillatory_drag(p, u2, d2, w);
    CHECK_THAT(lhs, WithinRel(rhs, 1e-13));
}

TEST_CASE("unsteady_drag", "[physical][drag]") {
    const auto p = bead();
    const double U0 = stokes_terminal_velocity(p);

    SECTION("terminal velocity balances buoyancy") {
        Trajectory steady;
        steady.meta.step = 0.01;
        for (int i = 0; i <= 100; ++i) {
            steady.push_back(0.01 * i, U0, 0.0);
        }
        CHECK_THAT(unsteady_drag(p, steady, 0.5), WithinRel(6.0 * pi * p.mu * p.R * U0, 1e-14));
        CHECK_THAT(unsteady_drag(p, steady, 0.537), WithinRel(p.buoyancy(), 1e-10));
    }
    SECTION("linear ramp") {
        const auto ramp = uniform(0.01, 100, [](double t) { return t; }, [](double) { return 1.0; });
        const double t = 0.8;
        const double nu = p.kinematic_viscosity();
        const double want = 6.0 * pi * p.mu * p.R * t + 0.5 * p.rho * p.volume() +
                            6.0 * pi * p.rho * p.R * p.R * std::sqrt(nu / pi) * 2.0 * std::sqrt(t);
        CHECK_THAT(unsteady_drag(p, ramp, t), WithinRel(want, 1e-12));
        const auto d = drag_components_at(p, ramp, 80);
        CHECK_THAT(d.basset, WithinRel(6.0 * pi * p.rho * p.R * p.R * std::sqrt(nu / pi) * 2.0 * std::sqrt(t), 1e-12));
        CHECK_THAT(d.total(), WithinRel(d.stokes + d.added_mass + d.basset, 1e-15));
    }
    SECTION("out of range") {
        const auto ramp = uniform(0.01, 100, [](double t) { return t; }, [](double) { return 1.0; });
        CHECK_THROWS_AS(unsteady_drag(p, ramp, 1.5), std::out_of_range);
        CHECK_THROWS_AS(unsteady_drag(p, ramp, -0.1), std::out_of_range);
        CHECK_THROWS_AS(drag_components_at(p, ramp, 101), std::out_of_range);
    }
    SECTION("force balance closes on the solver output") {
        const auto g = nondimensionalize(p);
        const auto traj = dimensional_trajectory(g, ide::solve_ide(g.kappa, 0.0, 1e-2, 10.0));
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); i += 13) {
            worst = std::max(worst, std::abs(force_balance_residual(p, traj, i)));
        }
        CHECK(worst <= 1e-10 * p.buoyancy());
    }
}

TEST_CASE("dimensional_trajectory", "[physical][scaling]") {
    const auto base = uniform(0.1, 30, [](double t) { return 1.0 - std::exp(-t); }, [](double t) { return std::exp(-t); });

    DimensionlessGroup unit;
    unit.B = 1.0;
    unit.U0 = 1.0;
    const auto same = dimensional_trajectory(unit, base);
    CHECK(same.times == base.times);
    CHECK(same.values == base.values);
    CHECK(same.derivatives == base.derivatives);

    const auto g = nondimensionalize(bead());
    const auto dim = dimensional_trajectory(g, base);
    const auto back = dimensionless_trajectory(g, dim);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK_THAT(back.times[i], WithinAbs(base.times[i], 1e-12 * (1.0 + base.times[i])));
        CHECK_THAT(back.values[i], WithinAbs(base.values[i], 1e-12));
        CHECK_THAT(back.derivatives[i], WithinAbs(base.derivatives[i], 1e-12));
        CHECK_THAT(dim.values[i], WithinRel(g.U0 * base.values[i], 1e-15));
    }
    CHECK_THAT(dim.meta.step, WithinRel(0.1 / g.B, 1e-15));
    // u -> 1 maps to U -> U0
    CHECK_THAT(dim.values.back(), WithinRel(g.U0 * (1.0 - std::exp(-3.0)), 1e-14));

    auto p = bead();
    p.rho_s = p.rho;
    const auto neutral = nondimensionalize(p);
    CHECK_THROWS_AS(dimensional_trajectory(neutral, base), std::domain_error);
    CHECK_THROWS_AS(dimensionless_trajectory(neutral, base), std::domain_error);
}
