#pragma once

// Dimensional model of a sphere settling at zero Reynolds number. SI units
// throughout.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sedsphere/ide.hpp"
#include "sedsphere/trajectory.hpp"

namespace sedsphere::physical {

struct PhysicalParams {
    double rho_s = 0.0;  // sphere density, kg/m^3
    double rho = 0.0;    // fluid density, kg/m^3
    double mu = 0.0;     // dynamic viscosity, Pa s
    double R = 0.0;      // sphere radius, m
    double g = 9.81;     // gravitational acceleration, m/s^2

    [[nodiscard]] double kinematic_viscosity() const noexcept { return mu / rho; }
    [[nodiscard]] double volume() const noexcept { return 4.0 * std::numbers::pi * R * R * R / 3.0; }
    [[nodiscard]] double buoyancy() const noexcept { return (rho_s - rho) * volume() * g; }
};

struct DimensionlessGroup {
    double B = 0.0;      // inverse viscous time, 1/s
    double Q = 0.0;      // memory coefficient, 1/sqrt(s)
    double M = 0.0;      // reduced buoyancy, m/s^2
    double kappa = 0.0;  // 9 rho / (2 rho_s + rho)
    double U0 = 0.0;     // Stokes terminal velocity, m/s
};

inline void validate(const PhysicalParams& p) {
    const bool finite = std::isfinite(p.rho_s) && std::isfinite(p.rho) && std::isfinite(p.mu) &&
                        std::isfinite(p.R) && std::isfinite(p.g);
    if (!finite || !(p.rho > 0.0) || !(p.mu > 0.0) || !(p.R > 0.0) || !(p.g > 0.0) ||
        !(p.rho_s >= 0.0)) {
        throw std::domain_error(
            "physical parameters require rho, mu, R, g > 0 and rho_s >= 0");
    }
}

/// U0 = 2 (rho_s - rho) g R^2 / (9 mu); negative for a rising sphere.
inline double stokes_terminal_velocity(const PhysicalParams& p) {
    validate(p);
    return 2.0 * (p.rho_s - p.rho) * p.g * p.R * p.R / (9.0 * p.mu);
}

inline DimensionlessGroup nondimensionalize(const PhysicalParams& p) {
    validate(p);
    const double denom = 2.0 * p.rho_s + p.rho;
    DimensionlessGroup d;
    d.B = 9.0 * p.mu / (p.R * p.R * denom);
    d.Q = 9.0 * p.rho / (p.R * denom) * std::sqrt(p.mu / (p.rho * std::numbers::pi));
    d.M = 2.0 * p.g * (p.rho_s - p.rho) / denom;
    // equals pi Q^2 / B; the direct ratio keeps kappa = 3 and 9 exact
    d.kappa = 9.0 * p.rho / denom;
    d.U0 = d.M / d.B;
    return d;
}

/// Drag on a sphere oscillating at angular frequency omega:
///     6 pi mu R (1 + R/delta) U + 3 pi R^2 rho delta (1 + 2R/(9 delta)) dU/dt,
/// with delta = sqrt(2 nu / omega).
inline double oscillatory_drag(const PhysicalParams& p, double U, double dUdt, double omega) {
    validate(p);
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::domain_error("oscillatory_drag: omega must be positive");
    }
    const double delta = std::sqrt(2.0 * p.kinematic_viscosity() / omega);
    return 6.0 * std::numbers::pi * p.mu * p.R * (1.0 + p.R / delta) * U +
           3.0 * std::numbers::pi * p.R * p.R * p.rho * delta * (1.0 + 2.0 * p.R / (9.0 * delta)) * dUdt;
}

struct DragComponents {
    double stokes = 0.0;      // 6 pi mu R U
    double added_mass = 0.0;  // rho V U' / 2
    double basset = 0.0;      // 6 pi rho R^2 sqrt(nu/pi) int_0^t U'(s)/sqrt(t-s) ds
    [[nodiscard]] double total() const noexcept { return stokes + added_mass + basset; }
};

/// Drag decomposition at grid point `index` of a dimensional trajectory
/// (uniform step, released at t = 0).
inline DragComponents drag_components_at(const PhysicalParams& p, const Trajectory& traj,
                                         std::size_t index) {
    validate(p);
    if (index >= traj.size()) {
        throw std::out_of_range("drag_components_at: index outside trajectory");
    }
    const double nu = p.kinematic_viscosity();
    DragComponents d;
    d.stokes = 6.0 * std::numbers::pi * p.mu * p.R * traj.values[index];
    d.added_mass = 0.5 * p.rho * p.volume() * traj.derivatives[index];
    d.basset = 6.0 * std::numbers::pi * p.rho * p.R * p.R * std::sqrt(nu / std::numbers::pi) *
               ide::basset_integral(traj, index);
    return d;
}

/// Total unsteady drag at time t. Between grid points the two neighbouring
/// grid values are interpolated linearly.
inline double unsteady_drag(const PhysicalParams& p, const Trajectory& traj, double t) {
    if (traj.empty() || !(t >= traj.times.front()) || !(t <= traj.times.back())) {
        throw std::out_of_range("unsteady_drag: t = " + std::to_string(t) +
                                " outside the trajectory domain");
    }
    const double h = uniform_step(traj);
    const double pos = (t - traj.times.front()) / h;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= traj.size() - 1) {
        return drag_components_at(p, traj, traj.size() - 1).total();
    }
    const double frac = pos - static_cast<double>(lo);
    const double f_lo = drag_components_at(p, traj, lo).total();
    if (frac <= 1e-12) {
        return f_lo;
    }
    const double f_hi = drag_components_at(p, traj, lo + 1).total();
    if (frac >= 1.0 - 1e-12) {
        return f_hi;
    }
    return (1.0 - frac) * f_lo + frac * f_hi;
}

/// rho_s V U' - (buoyancy - drag) at grid point `index`; zero when the
/// trajectory satisfies the force balance.
inline double force_balance_residual(const PhysicalParams& p, const Trajectory& traj,
                                     std::size_t index) {
    const DragComponents d = drag_components_at(p, traj, index);
    return p.rho_s * p.volume() * traj.derivatives[index] - (p.buoyancy() - d.total());
}

/// (tau, u, u') -> (tau / B, U0 u, U0 B u').
inline Trajectory dimensional_trajectory(const DimensionlessGroup& g, const Trajectory& traj) {
    if (g.U0 == 0.0) {
        throw std::domain_error("dimensional_trajectory: neutrally buoyant sphere (U0 = 0)");
    }
    if (!(g.B > 0.0)) {
        throw std::domain_error("dimensional_trajectory: B must be positive");
    }
    Trajectory out = traj;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.times[i] = traj.times[i] / g.B;
        out.values[i] = traj.values[i] * g.U0;
        out.derivatives[i] = traj.derivatives[i] * g.U0 * g.B;
    }
    out.meta.step = traj.meta.step / g.B;
    out.meta.params["B"] = g.B;
    out.meta.params["U0"] = g.U0;
    return out;
}

/// Inverse of dimensional_trajectory.
inline Trajectory dimensionless_trajectory(const DimensionlessGroup& g, const Trajectory& traj) {
    if (g.U0 == 0.0) {
        throw std::domain_error("dimensionless_trajectory: neutrally buoyant sphere (U0 = 0)");
    }
    if (!(g.B > 0.0)) {
        throw std::domain_error("dimensionless_trajectory: B must be positive");
    }
    Trajectory out = traj;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.times[i] = traj.times[i] * g.B;
        out.values[i] = traj.values[i] / g.U0;
        out.derivatives[i] = traj.derivatives[i] / (g.U0 * g.B);
    }
    out.meta.step = traj.meta.step * g.B;
    return out;
}

} // namespace sedsphere::physical
