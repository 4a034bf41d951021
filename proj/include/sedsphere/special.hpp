#pragma once

// Complex error function family.
//
// Everything here is evaluated through the Faddeeva function
//     w(z) = exp(-z^2) erfc(-i z),
// which stays bounded in the closed upper half plane. The Villat function
// Vi(z) = exp(z) erfc(sqrt(z)) is the product whose two factors grow and decay
// exponentially along the rays the sedimentation solution lives on, so it is
// always formed as w(i sqrt(z)) and never as the product itself.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "sedsphere/errors.hpp"
#include "sedsphere/quadrature.hpp"

namespace sedsphere {

/// Complex scalar used throughout. std::sqrt is the principal branch, so for
/// alpha on the upper unit circle sqrt(alpha) lies in the first quadrant.
using cplx = std::complex<double>;

namespace special {

namespace detail {

inline constexpr double inv_sqrt_pi = 0.56418958354775628694807945156077259;

// exp(y*y) * erfc(y) for 0 <= y <= ~26. y*y is split into a head and an exact
// tail so that the exponential does not inherit the rounding of the square.
inline double erfcx_nonneg(double y) {
    const double head = y * y;
    const double tail = std::fma(y, y, -head);
    return std::exp(head) * std::exp(tail) * std::erfc(y);
}

inline double sinc(double x, double sin_x) { return x == 0.0 ? 1.0 : sin_x / x; }

inline double sinh_taylor(double x) {
    return x * (1.0 + (x * x) * (1.0 / 6.0 + (1.0 / 120.0) * (x * x)));
}

// Maclaurin series sum_n (iz)^n / Gamma(n/2 + 1). Used only for |z| < 0.1.
inline cplx w_taylor(cplx z) {
    const cplx iz{-z.imag(), z.real()};
    double coef_even = 1.0;                  // 1/Gamma(k + 1)
    double coef_odd = 2.0 * inv_sqrt_pi;     // 1/Gamma(k + 3/2)
    cplx power = 1.0;
    cplx sum = 0.0;
    for (int k = 0; k < 40; ++k) {
        const cplx even = coef_even * power;
        power *= iz;
        const cplx odd = coef_odd * power;
        power *= iz;
        sum += even + odd;
        if (std::abs(even) + std::abs(odd) < 1e-17 * std::abs(sum)) {
            break;
        }
        coef_even /= static_cast<double>(k + 1);
        coef_odd /= static_cast<double>(k) + 1.5;
    }
    return sum;
}

// Continued fraction for large |z|, y >= 0. The depth fit follows the
// Poppe-Wijers estimate of the number of terms needed at double precision.
inline cplx w_continued_fraction(double x, double y) {
    const double ax = std::abs(x);
    if (ax + y > 1e7) {
        // w ~ i / (sqrt(pi) z), scaled against overflow
        if (ax > y) {
            const double ratio = y / x;
            const double denom = inv_sqrt_pi / (x + ratio * y);
            return {denom * ratio, denom};
        }
        const double ratio = x / y;
        const double denom = inv_sqrt_pi / (ratio * x + y);
        return {denom, denom * ratio};
    }
    if (ax + y > 4000.0) {
        // two terms: w ~ i z / (sqrt(pi) (z^2 - 1/2))
        const double dr = x * x - y * y - 0.5;
        const double di = 2.0 * x * y;
        const double denom = inv_sqrt_pi / (dr * dr + di * di);
        return {denom * (x * di - y * dr), denom * (x * dr + y * di)};
    }
    const double depth = std::floor(3.9 + 11.398 / (0.08254 * ax + 0.1421 * y + 0.2023));
    double wr = x;
    double wi = y;
    for (double nu = 0.5 * (depth - 1.0); nu > 0.4; nu -= 0.5) {
        const double denom = nu / (wr * wr + wi * wi);
        wr = x - wr * denom;
        wi = y + wi * denom;
    }
    const double denom = inv_sqrt_pi / (wr * wr + wi * wi);
    return {denom * wi, denom * wr};
}

// Exponentially convergent series of Zaghloul and Ali for moderate |z|,
// y >= 0. The step a = pi / sqrt(-log(eps / 2)) targets double precision.
inline cplx w_series(double xs, double y) {
    constexpr double a = 0.518321480430085929872;
    constexpr double c = 0.329973702884629072537;   // 2a / pi
    constexpr double a2 = 0.268657157075235951582;  // a^2
    constexpr double relerr = std::numeric_limits<double>::epsilon();

    const double x = std::abs(xs);
    double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0, sum5 = 0.0;

    if (x < 10.0) {
        double prod2ax = 1.0;
        double prodm2ax = 1.0;
        double expx2 = 0.0;
        if (x < 5e-4) {
            // sum5 - sum4 is accumulated directly to avoid cancellation
            const double x2 = x * x;
            expx2 = 1.0 - x2 * (1.0 - 0.5 * x2);
            const double ax2 = 2.0 * a * x;
            const double exp2ax = 1.0 + ax2 * (1.0 + ax2 * (0.5 + ax2 / 6.0));
            const double expm2ax = 1.0 - ax2 * (1.0 - ax2 * (0.5 - ax2 / 6.0));
            for (int n = 1;; ++n) {
                const double nn = n;
                const double coef = std::exp(-a2 * nn * nn) * expx2 / (a2 * nn * nn + y * y);
                prod2ax *= exp2ax;
                prodm2ax *= expm2ax;
                sum1 += coef;
                sum2 += coef * prodm2ax;
                sum3 += coef * prod2ax;
                sum5 += coef * (2.0 * a) * nn * sinh_taylor((2.0 * a) * nn * x);
                if (coef * prod2ax < relerr * sum3) {
                    break;
                }
            }
        } else {
            expx2 = std::exp(-x * x);
            const double exp2ax = std::exp(2.0 * a * x);
            const double expm2ax = 1.0 / exp2ax;
            for (int n = 1;; ++n) {
                const double nn = n;
                const double coef = std::exp(-a2 * nn * nn) * expx2 / (a2 * nn * nn + y * y);
                prod2ax *= exp2ax;
                prodm2ax *= expm2ax;
                sum1 += coef;
                sum2 += coef * prodm2ax;
                sum4 += (coef * prodm2ax) * (a * nn);
                sum3 += coef * prod2ax;
                sum5 += (coef * prod2ax) * (a * nn);
                if ((coef * prod2ax) * (a * nn) < relerr * sum5) {
                    break;
                }
            }
        }
        const double expx2erfcxy = expx2 * erfcx_nonneg(y);
        cplx head;
        if (y > 5.0) {
            // imaginary contributions of the leading terms cancel here
            const double sinxy = std::sin(x * y);
            head = (expx2erfcxy - c * y * sum1) * std::cos(2.0 * x * y) +
                   (c * x * expx2) * sinxy * sinc(x * y, sinxy);
        } else {
            const double sinxy = std::sin(xs * y);
            const double sin2xy = std::sin(2.0 * xs * y);
            const double cos2xy = std::cos(2.0 * xs * y);
            const double coef1 = expx2erfcxy - c * y * sum1;
            const double coef2 = c * xs * expx2;
            head = {coef1 * cos2xy + coef2 * sinxy * sinc(xs * y, sinxy),
                    coef2 * sinc(2.0 * xs * y, sin2xy) - coef1 * sin2xy};
        }
        return head + cplx{0.5 * c * y * (sum2 + sum3), 0.5 * c * std::copysign(sum5 - sum4, xs)};
    }

    // 10 <= x <= 28 with y tiny: only sum3 and sum5 matter. Sum outward from
    // the dominant index n0.
    const double head = std::exp(-x * x);
    const double n0 = std::floor(x / a + 0.5);
    const double dx = a * n0 - x;
    sum3 = std::exp(-dx * dx) / (a2 * (n0 * n0) + y * y);
    sum5 = a * n0 * sum3;
    const double exp1 = std::exp(4.0 * a * dx);
    double exp1dn = 1.0;
    double dn = 1.0;
    bool done = false;
    for (; n0 - dn > 0.0; dn += 1.0) {
        const double np = n0 + dn;
        const double nm = n0 - dn;
        double tp = std::exp(-(a * dn + dx) * (a * dn + dx));
        double tm = tp * (exp1dn *= exp1);
        tp /= (a2 * (np * np) + y * y);
        tm /= (a2 * (nm * nm) + y * y);
        sum3 += tp + tm;
        sum5 += a * (np * tp + nm * tm);
        if (a * (np * tp + nm * tm) < relerr * sum5) {
            done = true;
            break;
        }
    }
    while (!done) {
        const double np = n0 + dn;
        const double tp = std::exp(-(a * dn + dx) * (a * dn + dx)) / (a2 * (np * np) + y * y);
        dn += 1.0;
        sum3 += tp;
        sum5 += a * np * tp;
        done = a * np * tp < relerr * sum5;
    }
    return cplx{head, 0.0} + cplx{0.5 * c * y * (sum2 + sum3), 0.5 * c * std::copysign(sum5 - sum4, xs)};
}

inline cplx w_upper(double x, double y) {
    const double ax = std::abs(x);
    if (ax * ax + y * y < 0.01) {
        return w_taylor({x, y});
    }
    if (y > 7.0 || (ax > 6.0 && (y > 0.1 || (ax > 8.0 && y > 1e-10) || ax > 28.0))) {
        return w_continued_fraction(x, y);
    }
    return w_series(x, y);
}

} // namespace detail

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), relative accuracy ~1e-13 in
/// the closed upper half plane. The lower half plane goes through
/// w(z) = 2 exp(-z^2) - w(-z), which grows like exp(y^2 - x^2) there.
inline cplx faddeeva(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::domain_error("faddeeva: non-finite argument");
    }
    if (z.imag() >= 0.0) {
        return detail::w_upper(z.real(), z.imag());
    }
    const cplx reflected = detail::w_upper(-z.real(), -z.imag());
    return 2.0 * std::exp(-z * z) - reflected;
}

/// True when z sits on the branch cut of sqrt (the closed negative real axis
/// minus the origin).
inline bool on_branch_cut(cplx z) noexcept { return z.imag() == 0.0 && z.real() < 0.0; }

/// Villat function Vi(z) = exp(z) erfc(sqrt(z)), evaluated as w(i sqrt(z)).
inline cplx villat(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::domain_error("villat: non-finite argument");
    }
    if (on_branch_cut(z)) {
        throw std::domain_error("villat: argument on the branch cut (negative real axis)");
    }
    const cplx root = std::sqrt(z);
    return faddeeva(cplx{-root.imag(), root.real()});
}

struct AsymptoticValue {
    cplx value;
    /// Magnitude of the first omitted term.
    double error_estimate = 0.0;
};

/// Large-|z| expansion
///     Vi(z) ~ (pi z)^(-1/2) [1 + sum_{m=1}^{m_max} (-1)^m (2m-1)!! / (2z)^m].
/// The series diverges, so it is only accepted while the first omitted term
/// is smaller than the last kept one, and only for |arg z| < 3 pi / 4.
inline AsymptoticValue villat_asymptotic(cplx z, int m_max) {
    if (m_max < 0) {
        throw std::domain_error("villat_asymptotic: negative truncation order");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == cplx{0.0, 0.0}) {
        throw std::domain_error("villat_asymptotic: argument must be finite and nonzero");
    }
    if (std::abs(std::arg(z)) >= 0.75 * std::numbers::pi) {
        throw accuracy_error("villat_asymptotic: |arg z| >= 3pi/4, expansion not valid");
    }
    const double mag = std::abs(z);
    // |term_{m+1} / term_m| = (2m + 1) / (2|z|)
    if ((2.0 * m_max + 1.0) / (2.0 * mag) >= 1.0) {
        std::ostringstream msg;
        msg << "villat_asymptotic: |z| = " << mag << " too small for " << m_max
            << " terms (series already diverging)";
        throw accuracy_error(msg.str());
    }
    const cplx prefactor = 1.0 / std::sqrt(std::numbers::pi * z);
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int m = 1; m <= m_max; ++m) {
        term *= -(2.0 * m - 1.0) / (2.0 * z);
        sum += term;
    }
    const cplx omitted = term * (-(2.0 * m_max + 1.0) / (2.0 * z));
    return {prefactor * sum, std::abs(prefactor * omitted)};
}

/// exp(z) times erfc(sqrt(z)) from its Maclaurin series, multiplied in
/// working precision. Numerically unreliable once Re z is large: the two
/// factors over- and underflow and the series cancels catastrophically. Kept
/// to reproduce that failure. Throws std::overflow_error when an intermediate
/// leaves the double range.
inline cplx naive_villat(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::domain_error("naive_villat: non-finite argument");
    }
    if (on_branch_cut(z)) {
        throw std::domain_error("naive_villat: argument on the branch cut");
    }
    const cplx growth = std::exp(z);
    if (!std::isfinite(growth.real()) || !std::isfinite(growth.imag())) {
        throw std::overflow_error("naive_villat: exp(z) overflows");
    }
    const cplx zeta = std::sqrt(z);
    const cplx zeta2 = z;
    // erf(zeta) = 2/sqrt(pi) sum_n (-1)^n zeta^(2n+1) / (n! (2n+1))
    cplx term = zeta;
    cplx sum = zeta;
    const double min_terms = std::abs(zeta2);
    for (int n = 1; n < 100000; ++n) {
        term *= -zeta2 / static_cast<double>(n);
        const cplx piece = term / (2.0 * n + 1.0);
        sum += piece;
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
            throw std::overflow_error("naive_villat: erf series overflows");
        }
        if (n > min_terms && std::abs(piece) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    const cplx erfc_value = 1.0 - 2.0 * detail::inv_sqrt_pi * sum;
    const cplx out = growth * erfc_value;
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
        throw std::overflow_error("naive_villat: product overflows");
    }
    return out;
}

namespace detail {

inline void require_upper(double y, const char* who) {
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw std::domain_error(std::string(who) + ": requires y > 0");
    }
}

inline constexpr double oracle_cutoff = 9.0;

} // namespace detail

/// Re w(x + iy) = (1/pi) int y exp(-s^2) / ((x - s)^2 + y^2) ds, by adaptive
/// quadrature on |s| <= 9. Slow reference path, absolute error ~1e-12.
inline double faddeeva_re_quadrature(double x, double y) {
    detail::require_upper(y, "faddeeva_re_quadrature");
    auto f = [x, y](double s) {
        const double d = x - s;
        return y * std::exp(-s * s) / (d * d + y * y);
    };
    const double cut = detail::oracle_cutoff;
    const auto r = quadrature::integrate(f, -cut, cut, {x - y, x, x + y, 0.0}, 1e-12);
    return r.value / std::numbers::pi;
}

/// Im w(x + iy) = (1/pi) int (x - s) exp(-s^2) / ((x - s)^2 + y^2) ds.
inline double faddeeva_im_quadrature(double x, double y) {
    detail::require_upper(y, "faddeeva_im_quadrature");
    auto f = [x, y](double s) {
        const double d = x - s;
        return d * std::exp(-s * s) / (d * d + y * y);
    };
    const double cut = detail::oracle_cutoff;
    const auto r = quadrature::integrate(f, -cut, cut, {x - y, x, x + y, 0.0}, 1e-12);
    return r.value / std::numbers::pi;
}

} // namespace special
} // namespace sedsphere
