#pragma once

// The verification suite run by `sedsphere verify`: each check returns a
// VerificationReport, and the suite passes when every report does.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedsphere/analysis.hpp"
#include "sedsphere/analytic.hpp"
#include "sedsphere/ide.hpp"
#include "sedsphere/ode.hpp"
#include "sedsphere/output.hpp"
#include "sedsphere/special.hpp"

namespace sedsphere::suite {

using analysis::VerificationReport;

struct SuiteOptions {
    std::vector<double> kappas{0.5, 1.0, 2.0, 2.5, 2.9, 3.5, 3.9};
    double ide_step = 1e-3;
    double ide_horizon = 10.0;
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return out;
}

inline std::string label(const std::string& id, const std::string& key, double value) {
    return id + " " + key + "=" + output::format_double(value);
}

inline double sup_error_vs_rest(const Trajectory& traj, double kappa) {
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        worst = std::max(worst, std::abs(traj.values[i] - analytic::u_rest(traj.times[i], kappa)));
    }
    return worst;
}

} // namespace detail

/// Closed-form transient: no decrease beyond 1e-12 and u' > 0 on 2000
/// log-spaced times in [1e-4, 1e3], per kappa.
inline std::vector<VerificationReport> monotone_transient(const SuiteOptions& opt) {
    std::vector<VerificationReport> out;
    const auto times = detail::log_grid(1e-4, 1e3, 2000);
    for (double kappa : opt.kappas) {
        Trajectory traj;
        double nonpositive = 0.0;
        double min_du = std::numeric_limits<double>::infinity();
        for (double t : times) {
            const double du = analytic::u_rest_derivative(t, kappa);
            traj.push_back(t, analytic::u_rest(t, kappa), du);
            min_du = std::min(min_du, du);
            nonpositive += du > 0.0 ? 0.0 : 1.0;
        }
        auto mono = analysis::check_monotone(traj, 1e-12);
        mono.check_id = detail::label("monotone_u_rest", "kappa", kappa);
        out.push_back(mono);
        out.push_back(VerificationReport::make(detail::label("u_rest_derivative_positive", "kappa", kappa),
                                               nonpositive, kappa, 0.0,
                                               "count of samples with u' <= 0; min u' = " +
                                                   output::format_double(min_du)));
    }
    return out;
}

/// |u(100) - 1 + sqrt(kappa/(100 pi))| relative to the leading term, <= 5%.
inline VerificationReport terminal_approach(const SuiteOptions& opt) {
    double worst = 0.0;
    double where = 0.0;
    for (double kappa : opt.kappas) {
        const double lead = std::sqrt(kappa / (100.0 * std::numbers::pi));
        const double rel = std::abs(analytic::u_rest(100.0, kappa) - 1.0 + lead) / lead;
        if (rel >= worst) {
            worst = rel;
            where = kappa;
        }
    }
    return VerificationReport::make("terminal_approach", worst, where, 0.05,
                                    "location is kappa");
}

/// Direct solver against the closed form at kappa = 2, and its convergence
/// factor under step halving.
inline std::vector<VerificationReport> cross_formulation(const SuiteOptions& opt) {
    const double kappa = 2.0;
    const auto coarse = ide::solve_ide(kappa, 0.0, opt.ide_step, opt.ide_horizon);
    const auto fine = ide::solve_ide(kappa, 0.0, 0.5 * opt.ide_step, opt.ide_horizon);
    const double e_coarse = detail::sup_error_vs_rest(coarse, kappa);
    const double e_fine = detail::sup_error_vs_rest(fine, kappa);
    const double factor = e_coarse / e_fine;
    return {
        VerificationReport::make("ide_vs_closed_form", e_coarse, kappa, 1e-4, "sup-norm on [0, T]"),
        VerificationReport::make("ide_convergence", 1.0 / factor, kappa, 1.0 / 1.8,
                                 "inverse of the error reduction factor; factor = " +
                                     output::format_double(factor)),
    };
}

/// The direct solution at kappa = 2.5 satisfies the ODE form and the Abel
/// inversion identity.
inline std::vector<VerificationReport> ode_equivalence(const SuiteOptions& opt) {
    const double kappa = 2.5;
    const auto traj = ide::solve_ide(kappa, 0.0, opt.ide_step, opt.ide_horizon);
    return {analysis::ode_residual(traj, kappa, 0.0, 0.1), analysis::abel_identity_residual(traj, 1e-2)};
}

/// b = -1, A = 1, t0 = 1: the monotone initial state tracks A M(t + 1), and
/// perturbing v0 by 1e-3 diverges.
inline std::vector<VerificationReport> unique_monotone_trajectory() {
    const double b = -1.0, A = 1.0, t0 = 1.0;
    const auto ic = analytic::monotone_initial_conditions(b, A, t0);
    const auto traj = ode::solve_oscillator({b, A, t0, ic.v0, ic.v0_prime}, 1e-3, 20.0);
    double sup = 0.0;
    double where = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double err = std::abs(traj.values[i] - A * analytic::monotone_kernel_M(traj.times[i] + t0, b));
        if (err > sup) {
            sup = err;
            where = traj.times[i];
        }
    }
    std::vector<VerificationReport> out;
    out.push_back(VerificationReport::make("monotone_ic_tracks_kernel", sup, where, 1e-6));
    auto mono = analysis::check_monotone(traj, 1e-12);
    mono.check_id = "monotone_ic_trajectory_monotone";
    out.push_back(mono);
    for (double sign : {1.0, -1.0}) {
        const auto bumped =
            ode::solve_oscillator({b, A, t0, ic.v0 + sign * 1e-3, ic.v0_prime}, 1e-3, 40.0);
        double peak = 0.0;
        for (double v : bumped.values) {
            peak = std::max(peak, std::abs(v));
        }
        out.push_back(VerificationReport::make(
            detail::label("perturbed_ic_diverges", "dv0", sign * 1e-3), 10.0 * std::abs(ic.v0) / peak,
            40.0, 1.0, "10|v0| / max|v| on [0, 40]; below 1 means |v| exceeded 10|v0|"));
    }
    return out;
}

/// sqrt(kappa) M(0) = -1 for 20 kappa values in (0, 4).
inline VerificationReport decoupling_identity() {
    double worst = 0.0;
    double where = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double kappa = 4.0 * i / 21.0;
        const double dev = std::abs(std::sqrt(kappa) * analytic::monotone_kernel_M(0.0, 2.0 - kappa) + 1.0);
        if (dev >= worst) {
            worst = dev;
            where = kappa;
        }
    }
    return VerificationReport::make("decoupling_v0_minus_one", worst, where, 1e-12, "location is kappa");
}

/// Sign of the proof integral on a 12 x 12 grid (t log-spaced in [1e-2, 1e3],
/// theta = j pi / 13), and the two routes to Im{sqrt(alpha) Vi(alpha t)}.
inline std::vector<VerificationReport> proof_oracle() {
    const auto ts = detail::log_grid(1e-2, 1e3, 12);
    double nonnegative = 0.0;
    double max_integral = -std::numeric_limits<double>::infinity();
    double witness_bad = 0.0;
    double path_gap = 0.0;
    double gap_where = 0.0;
    for (double t : ts) {
        for (int j = 1; j <= 12; ++j) {
            const double theta = j * std::numbers::pi / 13.0;
            const double value = analysis::proof_integral(t, theta);
            max_integral = std::max(max_integral, value);
            nonnegative += value < 0.0 ? 0.0 : 1.0;
            // kappa with arg(alpha) = theta: alpha = e^{i theta}, kappa = 2 + 2 cos(theta)
            const double kappa = 2.0 + 2.0 * std::cos(theta);
            const auto w = analysis::imag_sqrt_alpha_villat(t, kappa);
            witness_bad += (w.direct > 0.0 && w.decomposed > 0.0) ? 0.0 : 1.0;
            const double gap = std::abs(w.direct - w.decomposed);
            if (gap > path_gap) {
                path_gap = gap;
                gap_where = t;
            }
        }
    }
    return {
        VerificationReport::make("proof_integral_negative", nonnegative, 0.0, 0.0,
                                 "count of grid points with integral >= 0; max = " +
                                     output::format_double(max_integral)),
        VerificationReport::make("imag_sqrt_alpha_villat_positive", witness_bad, 0.0, 0.0,
                                 "count of grid points with a nonpositive route"),
        VerificationReport::make("imag_sqrt_alpha_villat_paths_agree", path_gap, gap_where, 1e-10),
    };
}

/// Faddeeva against both quadrature representations, the derivative identity
/// of Vi, and the large-|z| expansion.
inline std::vector<VerificationReport> special_accuracy() {
    double quad_gap = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 1; j <= 5; ++j) {
            const double x = -2.0 + i;
            const double y = 0.4 * j;
            const cplx w = special::faddeeva({x, y});
            quad_gap = std::max(quad_gap, std::abs(w.real() - special::faddeeva_re_quadrature(x, y)));
            quad_gap = std::max(quad_gap, std::abs(w.imag() - special::faddeeva_im_quadrature(x, y)));
        }
    }
    double deriv_gap = 0.0;
    for (double r : {0.5, 1.0, 3.0, 10.0}) {
        for (double arg : {0.0, 1.0, 2.0, -2.5}) {
            const cplx z = std::polar(r, arg);
            const double step = 1e-5 * r;
            const cplx fd = (special::villat(z + step) - special::villat(z - step)) / (2.0 * step);
            const cplx exact = special::villat(z) - 1.0 / std::sqrt(std::numbers::pi * z);
            deriv_gap = std::max(deriv_gap, std::abs(fd - exact) / std::abs(exact));
        }
    }
    double asym_gap = 0.0;
    for (double r : {1e3, 1e4, 1e6}) {
        for (double arg : {0.0, 1.0, 2.0, -2.0}) {
            const cplx z = std::polar(r, arg);
            const cplx exact = special::villat(z);
            asym_gap = std::max(asym_gap, std::abs(special::villat_asymptotic(z, 8).value - exact) / std::abs(exact));
        }
    }
    return {
        VerificationReport::make("faddeeva_vs_quadrature", quad_gap, 0.0, 1e-10, "5x5 grid, absolute"),
        VerificationReport::make("villat_derivative_identity", deriv_gap, 0.0, 1e-6, "relative"),
        VerificationReport::make("villat_asymptotic", asym_gap, 0.0, 1e-6, "relative, |z| >= 1e3"),
    };
}

/// The naive product exp(z) erfc(sqrt z) fails where Vi stays bounded.
inline std::vector<VerificationReport> blow_up_reproduction() {
    const cplx z = std::polar(400.0, std::numbers::pi / 3.0);
    const cplx stable = special::villat(z);
    double disagreement = std::numeric_limits<double>::infinity();
    std::string how = "naive evaluation overflowed";
    try {
        const cplx naive = special::naive_villat(z);
        disagreement = std::abs(naive - stable) / std::abs(stable);
        how = "relative disagreement of the naive product";
    } catch (const std::overflow_error&) {
    }
    std::vector<VerificationReport> out;
    out.push_back(VerificationReport::make("naive_villat_fails", 1e-3 / disagreement, 400.0, 1.0,
                                           how + "; value is 1e-3 / disagreement"));
    out.push_back(VerificationReport::make("villat_bounded", std::abs(stable), 400.0, 1.0, "|Vi(z)|"));
    Trajectory traj;
    for (double t : detail::log_grid(1e-3, 1e3, 2000)) {
        traj.push_back(t, analytic::u_rest(t, 2.9), 0.0);
    }
    auto mono = analysis::check_monotone(traj, 1e-12);
    mono.check_id = "u_rest_monotone_to_1e3 kappa=2.9";
    out.push_back(mono);
    return out;
}

/// Root identities for kappa in (0, 4) and the classification boundaries at
/// kappa = 0, 2, 4.
inline std::vector<VerificationReport> root_identities() {
    double worst = 0.0;
    double where = 0.0;
    double bad_sign = 0.0;
    for (int i = 1; i < 400; ++i) {
        const double kappa = 0.01 * i;
        const auto r = analytic::char_roots(kappa);
        const double dev = std::max({std::abs(r.alpha * r.beta - 1.0),
                                     std::abs(r.alpha + r.beta - (kappa - 2.0)),
                                     std::abs(std::pow(std::sqrt(r.alpha) + std::sqrt(r.beta), 2) - kappa),
                                     std::abs(std::abs(r.alpha) - 1.0)});
        if (dev > worst) {
            worst = dev;
            where = kappa;
        }
        bad_sign += r.alpha.imag() > 0.0 ? 0.0 : 1.0;
    }
    using ode::RealSign;
    using ode::RootKind;
    const double d = 1e-6;
    const auto cls = [](double kappa) { return ode::classify_homogeneous(2.0 - kappa); };
    const bool boundaries =
        cls(-d).root_kind == RootKind::real_distinct && cls(0.0).root_kind == RootKind::real_double &&
        cls(d).root_kind == RootKind::complex_conjugate && cls(2.0 - d).re_sign == RealSign::negative &&
        cls(2.0).re_sign == RealSign::zero && cls(2.0 + d).re_sign == RealSign::positive &&
        cls(4.0 - d).root_kind == RootKind::complex_conjugate &&
        cls(4.0).root_kind == RootKind::real_double && cls(4.0 + d).root_kind == RootKind::real_distinct;
    return {
        VerificationReport::make("root_identities", worst, where, 1e-13, "location is kappa"),
        VerificationReport::make("root_alpha_upper_half", bad_sign, 0.0, 0.0, "count with Im alpha <= 0"),
        VerificationReport::make("stability_boundaries", boundaries ? 0.0 : 1.0, 0.0, 0.0,
                                 "kind flips at kappa = 0, 4; sign flips at 2"),
    };
}

inline std::vector<VerificationReport> run_all(const SuiteOptions& opt = {}) {
    std::vector<VerificationReport> out;
    auto append = [&out](std::vector<VerificationReport> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    append(monotone_transient(opt));
    out.push_back(terminal_approach(opt));
    append(cross_formulation(opt));
    append(ode_equivalence(opt));
    append(unique_monotone_trajectory());
    out.push_back(decoupling_identity());
    append(proof_oracle());
    append(special_accuracy());
    append(blow_up_reproduction());
    append(root_identities());
    return out;
}

} // namespace sedsphere::suite
