#pragma once

// Executable checks of the monotonicity result and of the equivalence between
// the integrodifferential, ODE and closed-form descriptions. Every check is
// floating-point evidence on sampled points, not a proof.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sedsphere/analytic.hpp"
#include "sedsphere/ide.hpp"
#include "sedsphere/output.hpp"
#include "sedsphere/quadrature.hpp"
#include "sedsphere/special.hpp"
#include "sedsphere/trajectory.hpp"

namespace sedsphere::analysis {

struct VerificationReport {
    std::string check_id;
    bool passed = false;
    double worst_violation = 0.0;
    /// Time (or parameter value) at which worst_violation occurs.
    double location = 0.0;
    double tolerance = 0.0;
    std::string detail;

    static VerificationReport make(std::string id, double worst, double where, double tol,
                                   std::string detail = {}) {
        VerificationReport r;
        r.check_id = std::move(id);
        r.worst_violation = worst;
        r.location = where;
        r.tolerance = tol;
        r.passed = worst <= tol;
        r.detail = std::move(detail);
        return r;
    }
};

/// Passes iff no sample drops below its predecessor by more than tol.
/// `detail` records the time of the first such drop.
inline VerificationReport check_monotone(const Trajectory& traj, double tol) {
    if (traj.empty()) {
        throw std::invalid_argument("check_monotone: empty trajectory");
    }
    double worst = 0.0;
    double where = traj.times.front();
    double first = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double drop = traj.values[i - 1] - traj.values[i];
        if (drop > worst) {
            worst = drop;
            where = traj.times[i];
        }
        if (drop > tol && std::isnan(first)) {
            first = traj.times[i];
        }
    }
    std::string detail = std::isnan(first) ? std::string("nondecreasing")
                                           : "first decrease at t=" + output::format_double(first);
    return VerificationReport::make("monotone", worst, where, tol, std::move(detail));
}

/// F(s) = s exp(-s^2) / P(s), P(s) = (s + sqrt(t) sin(theta/2))^2 + t cos^2(theta/2).
inline double proof_integrand_F(double s, double t, double theta) {
    if (!(t > 0.0)) {
        throw std::domain_error("proof_integrand_F: t must be positive");
    }
    const double shift = std::sqrt(t) * std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    const double p = (s + shift) * (s + shift) + t * c * c;
    return s * std::exp(-s * s) / p;
}

namespace detail {

inline constexpr double tail_cutoff = 9.0;  // exp(-81) ~ 7e-36

inline void require_angle(double theta, const char* who) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) {
        throw std::domain_error(std::string(who) + ": theta must lie in (0, pi)");
    }
}

} // namespace detail

/// int F(s) ds over |s| <= 9 by adaptive Gauss-Kronrod, split at the origin
/// and around the near-pole of 1/P. Strictly negative for every t > 0 and
/// theta in (0, pi).
template <unsigned Points = 61>
double proof_integral(double t, double theta) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::domain_error("proof_integral: t must be positive");
    }
    detail::require_angle(theta, "proof_integral");
    const double centre = -std::sqrt(t) * std::sin(0.5 * theta);
    const double width = std::sqrt(t) * std::cos(0.5 * theta);
    auto f = [t, theta](double s) { return proof_integrand_F(s, t, theta); };
    const double cut = detail::tail_cutoff;
    const auto r = quadrature::integrate<Points>(
        f, -cut, cut, {0.0, centre - width, centre, centre + width}, 0.0, 1e-12);
    return r.value;
}

/// Im{sqrt(alpha) Vi(alpha t)} by two routes: directly, and through
/// alpha = e^{i theta}, Vi(alpha t) = w(x + iy) with x = -sqrt(t) sin(theta/2),
/// y = sqrt(t) cos(theta/2), as cos(theta/2) Im w + sin(theta/2) Re w.
struct SignWitness {
    double direct = 0.0;
    double decomposed = 0.0;
    double theta = 0.0;
};

inline SignWitness imag_sqrt_alpha_villat(double t, double kappa) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::domain_error("imag_sqrt_alpha_villat: t must be positive");
    }
    if (!(kappa > 0.0 && kappa < 4.0)) {
        throw std::domain_error("imag_sqrt_alpha_villat: kappa must lie in (0, 4)");
    }
    const auto roots = analytic::char_roots(kappa);
    SignWitness out;
    out.direct = (std::sqrt(roots.alpha) * special::villat(roots.alpha * t)).imag();
    out.theta = std::arg(roots.alpha);
    const double half = 0.5 * out.theta;
    const double x = -std::sqrt(t) * std::sin(half);
    const double y = std::sqrt(t) * std::cos(half);
    const cplx w = special::faddeeva({x, y});
    out.decomposed = std::cos(half) * w.imag() + std::sin(half) * w.real();
    return out;
}

/// x cos(theta/2) + y sin(theta/2) for the (x, y) above; zero up to rounding.
inline double cancellation_residual(double t, double theta) {
    const double half = 0.5 * theta;
    const double x = -std::sqrt(t) * std::sin(half);
    const double y = std::sqrt(t) * std::cos(half);
    return x * std::cos(half) + y * std::sin(half);
}

/// Abel inversion check on a uniformly spaced trajectory:
///     int_0^t F(s)/sqrt(t - s) ds = pi (u(t) - u(0)),  F(t) = int_0^t u'(s)/sqrt(t - s) ds,
/// both integrals by product integration. The deviation at each grid point is
/// normalised by max_t pi |u(t) - u(0)| (absolute when that is zero).
inline VerificationReport abel_identity_residual(const Trajectory& traj, double tol = 1e-2) {
    if (traj.size() < 2) {
        throw std::invalid_argument("abel_identity_residual: need at least two samples");
    }
    const std::size_t n = traj.size() - 1;
    const ide::CellWeights cells(n, uniform_step(traj));
    std::vector<double> inner(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        inner[k] = cells.apply(k, traj.derivatives);
    }
    double scale = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        scale = std::max(scale, std::numbers::pi * std::abs(traj.values[k] - traj.values[0]));
    }
    const double norm = scale > 0.0 ? scale : 1.0;
    double worst = 0.0;
    double where = traj.times.front();
    for (std::size_t k = 1; k <= n; ++k) {
        const double lhs = cells.apply(k, inner);
        const double rhs = std::numbers::pi * (traj.values[k] - traj.values[0]);
        const double dev = std::abs(lhs - rhs) / norm;
        if (dev > worst) {
            worst = dev;
            where = traj.times[k];
        }
    }
    return VerificationReport::make("abel_identity", worst, where, tol,
                                    "relative to max pi|u - u(0)| = " + output::format_double(scale));
}

/// Residual of u'' + (2 - kappa) u' + u = 1 + sqrt(kappa/(pi t)) (u0 - 1) on the
/// interior of a uniform trajectory, u'' by central differences of the stored
/// derivative. Points with t < 10 h are skipped (singular forcing). The default
/// tolerance is 100 h.
inline VerificationReport ode_residual(const Trajectory& traj, double kappa, double u0,
                                       double tol = -1.0) {
    if (traj.size() < 3) {
        throw std::invalid_argument("ode_residual: need at least three samples");
    }
    const double h = uniform_step(traj);
    if (tol < 0.0) {
        tol = 100.0 * h;
    }
    const double forcing = std::sqrt(kappa / std::numbers::pi) * (u0 - 1.0);
    double worst = 0.0;
    double where = traj.times.front();
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < 10.0 * h) {
            continue;
        }
        const double d2 = (traj.derivatives[i + 1] - traj.derivatives[i - 1]) / (2.0 * h);
        const double res = d2 + (2.0 - kappa) * traj.derivatives[i] + traj.values[i] - 1.0 -
                           forcing / std::sqrt(t);
        if (std::abs(res) > worst) {
            worst = std::abs(res);
            where = t;
        }
    }
    return VerificationReport::make("ode_residual", worst, where, tol);
}

/// Samples the closed-form rest solution (t, u, u') on t_n = n h, n = 0..N.
inline Trajectory sample_u_rest(double kappa, double h, double T) {
    if (!(h > 0.0) || !(T >= h)) {
        throw std::domain_error("sample_u_rest: need h > 0 and T >= h");
    }
    const auto steps = static_cast<std::size_t>(std::floor(T / h + 1e-9));
    Trajectory traj;
    traj.meta.solver = "closed-form";
    traj.meta.step = h;
    traj.meta.params = {{"kappa", kappa}, {"h", h}, {"T", T}};
    traj.reserve(steps + 1);
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * h;
        traj.push_back(t, analytic::u_rest(t, kappa), analytic::u_rest_derivative(t, kappa));
    }
    return traj;
}

} // namespace sedsphere::analysis
