#pragma once

// Fixed-step integration of
//     v'' + b v' + v = -A / sqrt(pi (t + t0))
// and classification of its homogeneous part m^2 + b m + 1.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "sedsphere/analytic.hpp"
#include "sedsphere/errors.hpp"
#include "sedsphere/trajectory.hpp"

namespace sedsphere::ode {

enum class RootKind { complex_conjugate, real_distinct, real_double };
enum class RealSign { negative, zero, positive };

struct StabilityClass {
    RootKind root_kind = RootKind::complex_conjugate;
    RealSign re_sign = RealSign::negative;  // sign of Re of the roots, -b/2 for complex pairs

    friend bool operator==(const StabilityClass&, const StabilityClass&) = default;
};

inline const char* to_string(RootKind k) {
    switch (k) {
    case RootKind::complex_conjugate: return "complex-conjugate";
    case RootKind::real_distinct: return "real-distinct";
    case RootKind::real_double: return "real-double";
    }
    return "?";
}

inline const char* to_string(RealSign s) {
    switch (s) {
    case RealSign::negative: return "negative";
    case RealSign::zero: return "zero";
    case RealSign::positive: return "positive";
    }
    return "?";
}

inline StabilityClass classify_homogeneous(double b) {
    if (!std::isfinite(b)) {
        throw std::domain_error("classify_homogeneous: non-finite damping");
    }
    StabilityClass c;
    const double a = std::abs(b);
    c.root_kind = a < 2.0 ? RootKind::complex_conjugate
                          : (a == 2.0 ? RootKind::real_double : RootKind::real_distinct);
    // real roots share the sign of -b as well, since their product is 1
    c.re_sign = b > 0.0 ? RealSign::negative : (b < 0.0 ? RealSign::positive : RealSign::zero);
    return c;
}

struct FixedPoint {
    double x = 1.0;
    double y = 0.0;
    std::array<cplx, 2> eigenvalues{};
};

/// Equilibrium (1, 0) of x' = y, y' = (1 - x) + (kappa - 2) y with the
/// eigenvalues of its linearisation (the roots of m^2 + (2 - kappa) m + 1).
inline FixedPoint phase_portrait_fixed_point(double kappa) {
    if (!std::isfinite(kappa)) {
        throw std::domain_error("phase_portrait_fixed_point: non-finite kappa");
    }
    const double b = 2.0 - kappa;
    const double disc = b * b - 4.0;
    FixedPoint fp;
    if (disc < 0.0) {
        const double im = 0.5 * std::sqrt(-disc);
        fp.eigenvalues = {cplx{-0.5 * b, im}, cplx{-0.5 * b, -im}};
    } else {
        const double root = std::sqrt(disc);
        fp.eigenvalues = {cplx{0.5 * (-b + root), 0.0}, cplx{0.5 * (-b - root), 0.0}};
    }
    return fp;
}

struct OscillatorProblem {
    double b = 0.0;
    double A = 0.0;
    double t0 = 1.0;
    double v0 = 0.0;
    double v0_prime = 0.0;
};

struct SolveOptions {
    /// With t0 = 0 the forcing is singular at the start; the state at t = h is
    /// then taken from the closed-form solution. Disabling this makes such a
    /// problem a configuration error.
    bool closed_form_bootstrap = true;
    /// States beyond this magnitude end the integration with
    /// meta.overflow_truncated set.
    double overflow_limit = 1e290;
};

namespace detail {

struct State {
    double v;
    double dv;
};

inline State rk4_step(const OscillatorProblem& p, double t, State s, double h) {
    const double amp = p.A / std::sqrt(std::numbers::pi);
    auto rhs = [&](double tt, State x) -> State {
        return {x.dv, -x.v - p.b * x.dv - amp / std::sqrt(tt + p.t0)};
    };
    const State k1 = rhs(t, s);
    const State k2 = rhs(t + 0.5 * h, {s.v + 0.5 * h * k1.v, s.dv + 0.5 * h * k1.dv});
    const State k3 = rhs(t + 0.5 * h, {s.v + 0.5 * h * k2.v, s.dv + 0.5 * h * k2.dv});
    const State k4 = rhs(t + h, {s.v + h * k3.v, s.dv + h * k3.dv});
    return {s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            s.dv + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)};
}

// Steps that start within this many steps of the forcing singularity are
// split into sub-steps, where the 1/sqrt forcing is too rough for one RK4 step.
inline constexpr double near_singular_steps = 32.0;
inline constexpr int near_singular_substeps = 16;

} // namespace detail

/// Classical fourth-order Runge-Kutta on x' = y, y' = -x - b y - A/sqrt(pi (t + t0))
/// with fixed step h on [0, T]. Samples are stored at t_n = n h.
inline Trajectory solve_oscillator(const OscillatorProblem& prob, double h, double T,
                                   const SolveOptions& opts = {}) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::domain_error("solve_oscillator: step must be positive");
    }
    if (!(T >= h) || !std::isfinite(T)) {
        throw std::domain_error("solve_oscillator: horizon must satisfy T >= h");
    }
    if (!(prob.t0 >= 0.0) || !std::isfinite(prob.b) || !std::isfinite(prob.A) ||
        !std::isfinite(prob.v0) || !std::isfinite(prob.v0_prime)) {
        throw std::domain_error("solve_oscillator: invalid problem parameters");
    }
    const auto steps = static_cast<std::size_t>(std::floor(T / h + 1e-9));

    Trajectory traj;
    traj.meta.solver = "ode";
    traj.meta.step = h;
    traj.meta.params = {{"b", prob.b}, {"A", prob.A}, {"t0", prob.t0}, {"v0", prob.v0},
                        {"v0_prime", prob.v0_prime}, {"h", h}, {"T", T}};
    traj.reserve(steps + 1);
    traj.push_back(0.0, prob.v0, prob.v0_prime);

    detail::State s{prob.v0, prob.v0_prime};
    std::size_t first = 0;
    const bool singular = prob.t0 == 0.0 && prob.A != 0.0;
    if (singular) {
        if (!opts.closed_form_bootstrap) {
            throw configuration_error(
                "solve_oscillator: t0 = 0 has singular forcing; enable the closed-form bootstrap");
        }
        if (!(std::abs(prob.b) < 2.0)) {
            throw configuration_error(
                "solve_oscillator: closed-form bootstrap needs complex roots (|b| < 2)");
        }
        const auto st = analytic::general_solution_state(h, prob.b, prob.A, 0.0, prob.v0, prob.v0_prime);
        s = {st.v, st.dv};
        traj.push_back(h, s.v, s.dv);
        first = 1;
        traj.meta.params["bootstrap_time"] = h;
    }

    for (std::size_t n = first; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        if (t + prob.t0 < detail::near_singular_steps * h) {
            const double sub = h / detail::near_singular_substeps;
            for (int k = 0; k < detail::near_singular_substeps; ++k) {
                s = detail::rk4_step(prob, t + k * sub, s, sub);
            }
        } else {
            s = detail::rk4_step(prob, t, s, h);
        }
        if (!std::isfinite(s.v) || !std::isfinite(s.dv) || std::abs(s.v) > opts.overflow_limit ||
            std::abs(s.dv) > opts.overflow_limit) {
            traj.meta.overflow_truncated = true;
            break;
        }
        traj.push_back(static_cast<double>(n + 1) * h, s.v, s.dv);
    }
    return traj;
}

/// The sedimentation problem as an oscillator: v = u - 1 with b = 2 - kappa,
/// A = sqrt(kappa) (1 - u0), t0 = 0, v(0) = u0 - 1, v'(0) = 1 - u0.
inline OscillatorProblem sphere_problem(double kappa, double u0 = 0.0) {
    return {2.0 - kappa, std::sqrt(kappa) * (1.0 - u0), 0.0, u0 - 1.0, 1.0 - u0};
}

} // namespace sedsphere::ode
