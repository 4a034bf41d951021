#pragma once

// Closed-form solutions.
//
// The rescaled sedimentation problem
//     u'' + (2 - kappa) u' + u = 1 - sqrt(kappa / (pi tau)),  u(0) = 0, u'(0) = 1
// and the oscillator family
//     v'' + b v' + v = -A / sqrt(pi (t + t0))
// are solved in terms of the roots alpha, beta of m^2 + b m + 1 and the Villat
// function. For |b| < 2 the roots are a conjugate pair on the unit circle, so
// every expression below is of the form X - conj(X) and is real; the real part
// is returned after checking the imaginary residue is at rounding level.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <utility>

#include "sedsphere/errors.hpp"
#include "sedsphere/special.hpp"

namespace sedsphere::analytic {

struct CharRoots {
    cplx alpha;  // Im >= 0, or the larger root when both are real
    cplx beta;
    double b = 0.0;            // damping coefficient, b = 2 - kappa
    double kappa_equiv = 0.0;  // 2 - b
    bool complex_pair = true;
};

/// Roots of m^2 + b m + 1 for |b| != 2.
inline CharRoots roots_from_damping(double b) {
    if (!std::isfinite(b)) {
        throw std::domain_error("roots_from_damping: non-finite damping");
    }
    if (std::abs(b) == 2.0) {
        throw degenerate_root_error("characteristic polynomial has a double root (|b| = 2)");
    }
    CharRoots r;
    r.b = b;
    r.kappa_equiv = 2.0 - b;
    if (std::abs(b) < 2.0) {
        const double im = 0.5 * std::sqrt((2.0 - b) * (2.0 + b));
        r.alpha = {-0.5 * b, im};
        r.beta = std::conj(r.alpha);
        r.complex_pair = true;
    } else {
        const double disc = std::sqrt((std::abs(b) - 2.0) * (std::abs(b) + 2.0));
        // the root of larger magnitude has no cancellation; the product is 1
        const double far = 0.5 * (-b + std::copysign(disc, -b));
        const double larger = b < 0.0 ? far : 1.0 / far;
        r.alpha = {larger, 0.0};
        r.beta = {1.0 / larger, 0.0};
        r.complex_pair = false;
    }
    return r;
}

/// Roots of m^2 + (2 - kappa) m + 1 for kappa in (0, 9), kappa != 4.
inline CharRoots char_roots(double kappa) {
    if (!(kappa > 0.0 && kappa < 9.0)) {
        throw std::domain_error("char_roots: kappa must lie in (0, 9)");
    }
    if (kappa == 4.0) {
        throw degenerate_root_error("char_roots: kappa = 4 gives a double root");
    }
    return roots_from_damping(2.0 - kappa);
}

namespace detail {

inline void require_complex_kappa(double kappa, const char* who) {
    if (!(kappa > 0.0 && kappa < 4.0)) {
        throw std::domain_error(std::string(who) + ": kappa must lie in (0, 4)");
    }
}

inline void require_damping(double b, const char* who) {
    if (!(b > -2.0 && b < 2.0)) {
        throw std::domain_error(std::string(who) + ": damping b must lie in (-2, 2)");
    }
}

inline void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::domain_error(std::string(who) + ": time must be finite and >= 0");
    }
}

// Real part of a conjugate-symmetric expression; a residue above rounding is
// an internal error.
inline double checked_real(cplx value, const char* who) {
    const double tol = 1e-13 * (1.0 + std::abs(value.real()));
    if (!(std::abs(value.imag()) <= tol)) {
        std::ostringstream msg;
        msg << who << ": imaginary residue " << value.imag() << " exceeds rounding level";
        throw consistency_error(msg.str());
    }
    return value.real();
}

// exp(alpha t), surfacing overflow instead of returning inf.
inline cplx checked_exp(cplx exponent, const char* who) {
    const cplx e = std::exp(exponent);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
        throw std::overflow_error(std::string(who) + ": exp(alpha t) overflows");
    }
    return e;
}

} // namespace detail

/// Sphere released from rest: u(tau) for kappa in (0, 4).
inline double u_rest(double tau, double kappa) {
    detail::require_complex_kappa(kappa, "u_rest");
    detail::require_time(tau, "u_rest");
    const CharRoots r = char_roots(kappa);
    const cplx va = special::villat(r.alpha * tau);
    const cplx vb = special::villat(r.beta * tau);
    const cplx bracket = va / std::sqrt(r.alpha) - vb / std::sqrt(r.beta);
    return 1.0 + detail::checked_real(std::sqrt(kappa) / (r.alpha - r.beta) * bracket, "u_rest");
}

/// u'(tau) = sqrt(kappa) Im{sqrt(alpha) Vi(alpha tau)} / Im{alpha}. Real by
/// construction; u'(0) = 1.
inline double u_rest_derivative(double tau, double kappa) {
    detail::require_complex_kappa(kappa, "u_rest_derivative");
    detail::require_time(tau, "u_rest_derivative");
    const CharRoots r = char_roots(kappa);
    const cplx x = std::sqrt(r.alpha) * special::villat(r.alpha * tau);
    return std::sqrt(kappa) * x.imag() / r.alpha.imag();
}

/// Solution for u(0) = eps, u'(0) = 1 - eps: (1 - eps) u_rest + eps.
inline double u_general(double tau, double kappa, double eps) {
    return (1.0 - eps) * u_rest(tau, kappa) + eps;
}

inline double u_general_derivative(double tau, double kappa, double eps) {
    return (1.0 - eps) * u_rest_derivative(tau, kappa);
}

/// M(t) = (sqrt(beta) Vi(alpha t) - sqrt(alpha) Vi(beta t)) / (alpha - beta),
/// the monotone solution of v'' + b v' + v = -1/sqrt(pi t). M(0) equals
/// -1/(sqrt(alpha) + sqrt(beta)) and M increases to 0.
inline double monotone_kernel_M(double t, double b) {
    detail::require_damping(b, "monotone_kernel_M");
    detail::require_time(t, "monotone_kernel_M");
    const CharRoots r = roots_from_damping(b);
    const cplx va = special::villat(r.alpha * t);
    const cplx vb = special::villat(r.beta * t);
    const cplx value = (std::sqrt(r.beta) * va - std::sqrt(r.alpha) * vb) / (r.alpha - r.beta);
    return detail::checked_real(value, "monotone_kernel_M");
}

/// M'(t). Differentiating with Vi'(z) = Vi(z) - 1/sqrt(pi z), the two
/// 1/sqrt(pi t) contributions cancel because sqrt(alpha) sqrt(beta) = 1, leaving
///     M'(t) = (sqrt(alpha) Vi(alpha t) - sqrt(beta) Vi(beta t)) / (alpha - beta),
/// which is finite at t = 0 with M'(0) = 1/(sqrt(alpha) + sqrt(beta)).
inline double monotone_kernel_M_derivative(double t, double b) {
    detail::require_damping(b, "monotone_kernel_M_derivative");
    detail::require_time(t, "monotone_kernel_M_derivative");
    const CharRoots r = roots_from_damping(b);
    const cplx x = std::sqrt(r.alpha) * special::villat(r.alpha * t);
    return x.imag() / r.alpha.imag();
}

struct OscillatorState {
    double v = 0.0;
    double dv = 0.0;
};

namespace detail {

// Coefficient of exp(alpha t) carried by the variation-of-parameters
// particular solution: A sqrt(beta) Vi(alpha t0) / (beta - alpha).
inline cplx particular_head(const CharRoots& r, double A, double t0) {
    return A * std::sqrt(r.beta) * special::villat(r.alpha * t0) / (r.beta - r.alpha);
}

inline void require_particular_args(double t, double b, double t0, const char* who) {
    require_damping(b, who);
    require_time(t, who);
    require_time(t0, who);
}

} // namespace detail

/// Variation-of-parameters particular solution with v_p(0) = v_p'(0) = 0:
///     v_p(t) = A/(beta - alpha) {sqrt(beta) Vi(alpha t0) e^{alpha t}
///                                - sqrt(alpha) Vi(beta t0) e^{beta t}} + A M(t + t0).
/// The exponential terms are evaluated as written; std::overflow_error once
/// they leave the double range.
inline double particular_solution_vp(double t, double b, double A, double t0) {
    detail::require_particular_args(t, b, t0, "particular_solution_vp");
    if (A == 0.0) {
        return 0.0;
    }
    const CharRoots r = roots_from_damping(b);
    const cplx ea = detail::checked_exp(r.alpha * t, "particular_solution_vp");
    const cplx eb = std::conj(ea);
    const cplx braces = std::sqrt(r.beta) * special::villat(r.alpha * t0) * ea -
                        std::sqrt(r.alpha) * special::villat(r.beta * t0) * eb;
    const double head = detail::checked_real(A / (r.beta - r.alpha) * braces, "particular_solution_vp");
    return head + A * monotone_kernel_M(t + t0, b);
}

inline double particular_solution_vp_derivative(double t, double b, double A, double t0) {
    detail::require_particular_args(t, b, t0, "particular_solution_vp_derivative");
    if (A == 0.0) {
        return 0.0;
    }
    const CharRoots r = roots_from_damping(b);
    const cplx ea = detail::checked_exp(r.alpha * t, "particular_solution_vp_derivative");
    const cplx eb = std::conj(ea);
    const cplx braces = r.alpha * std::sqrt(r.beta) * special::villat(r.alpha * t0) * ea -
                        r.beta * std::sqrt(r.alpha) * special::villat(r.beta * t0) * eb;
    const double head =
        detail::checked_real(A / (r.beta - r.alpha) * braces, "particular_solution_vp_derivative");
    return head + A * monotone_kernel_M_derivative(t + t0, b);
}

/// Homogeneous coefficients (C1, C2) with C1 + C2 = w0 and
/// alpha C1 + beta C2 = w0'.
inline std::pair<cplx, cplx> coefficients_from_ic(double b, double w0, double w0_prime) {
    detail::require_damping(b, "coefficients_from_ic");
    const CharRoots r = roots_from_damping(b);
    const cplx denom = r.beta - r.alpha;
    return {(r.beta * w0 - w0_prime) / denom, (w0_prime - r.alpha * w0) / denom};
}

/// Full solution C1 e^{alpha t} + C2 e^{beta t} + v_p(t) with v(0) = v0 and
/// v'(0) = v0_prime, returned with its derivative.
///
/// The growing modes are combined with the matching part of v_p before any
/// exponential is formed. When the combined coefficient is at rounding level
/// relative to its two parts, the initial data lie on the monotone trajectory
/// to working precision and the homogeneous part is dropped; otherwise round-off
/// of order eps would be amplified by e^{Re(alpha) t}.
inline OscillatorState general_solution_state(double t, double b, double A, double t0, double v0,
                                              double v0_prime) {
    detail::require_particular_args(t, b, t0, "general_solution");
    if (!std::isfinite(v0) || !std::isfinite(v0_prime) || !std::isfinite(A)) {
        throw std::domain_error("general_solution: non-finite initial data");
    }
    const CharRoots r = roots_from_damping(b);
    // v_p(0) and v_p'(0) vanish identically; they are subtracted for the record
    const double w0 = v0 - particular_solution_vp(0.0, b, A, t0);
    const double w0_prime = v0_prime - particular_solution_vp_derivative(0.0, b, A, t0);
    const auto [c1, c2] = coefficients_from_ic(b, w0, w0_prime);
    const cplx head = detail::particular_head(r, A, t0);
    cplx d1 = c1 + head;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(d1) <= 64.0 * eps * (std::abs(c1) + std::abs(head))) {
        d1 = 0.0;
    }
    OscillatorState s{A * monotone_kernel_M(t + t0, b), A * monotone_kernel_M_derivative(t + t0, b)};
    if (d1 != cplx{0.0, 0.0}) {
        const cplx ea = detail::checked_exp(r.alpha * t, "general_solution");
        const cplx mode = d1 * ea;
        // D2 = conj(D1), so D1 e^{alpha t} + D2 e^{beta t} = 2 Re(D1 e^{alpha t})
        s.v += 2.0 * mode.real();
        s.dv += 2.0 * (r.alpha * mode).real();
        if (!std::isfinite(s.v) || !std::isfinite(s.dv)) {
            throw std::overflow_error("general_solution: homogeneous modes overflow");
        }
    }
    return s;
}

inline double general_solution(double t, double b, double A, double t0, double v0, double v0_prime) {
    return general_solution_state(t, b, A, t0, v0, v0_prime).v;
}

struct MonotoneIC {
    double v0 = 0.0;
    double v0_prime = 0.0;
    cplx c1;
    cplx c2;
};

/// The unique initial state whose solution is v(t) = A M(t + t0), together
/// with the homogeneous coefficients that cancel the growing modes of v_p.
inline MonotoneIC monotone_initial_conditions(double b, double A, double t0) {
    detail::require_damping(b, "monotone_initial_conditions");
    detail::require_time(t0, "monotone_initial_conditions");
    const CharRoots r = roots_from_damping(b);
    MonotoneIC ic;
    ic.v0 = A * monotone_kernel_M(t0, b);
    ic.v0_prime = A * monotone_kernel_M_derivative(t0, b);
    ic.c1 = -detail::particular_head(r, A, t0);
    ic.c2 = std::conj(ic.c1);
    return ic;
}

} // namespace sedsphere::analytic
