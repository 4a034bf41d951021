#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sedsphere/analysis.hpp"
#include "sedsphere/ide.hpp"
#include "sedsphere/quadrature.hpp"
#include "sedsphere/suite.hpp"

using namespace sedsphere;
using namespace sedsphere::analysis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

Trajectory sampled(double h, int n, double (*u)(double), double (*du)(double)) {
    Trajectory traj;
    traj.meta.step = h;
    for (int i = 0; i <= n; ++i) {
        traj.push_back(h * i, u(h * i), du(h * i));
    }
    return traj;
}

// same integral folded onto s > 0: F(s) + F(-s) = -4 sqrt(t) sin(theta/2) s^2 e^{-s^2} / (P(s) P(-s))
double folded_proof_integral(double t, double theta) {
    const double a = std::sqrt(t) * std::sin(0.5 * theta);
    const double c2 = t * std::cos(0.5 * theta) * std::cos(0.5 * theta);
    auto f = [=](double s) {
        const double pp = (s + a) * (s + a) + c2;
        const double pm = (s - a) * (s - a) + c2;
        return -4.0 * a * s * s * std::exp(-s * s) / (pp * pm);
    };
    return quadrature::integrate<21>(f, 0.0, 9.0, {a}, 0.0, 1e-13).value;
}

} // namespace

TEST_CASE("VerificationReport::make", "[analysis][report]") {
    CHECK(VerificationReport::make("a", 1e-3, 0.0, 1e-3).passed);
    CHECK_FALSE(VerificationReport::make("a", 2e-3, 0.0, 1e-3).passed);
    CHECK_FALSE(VerificationReport::make("a", NAN, 0.0, 1e-3).passed);
}

TEST_CASE("check_monotone", "[analysis][monotone]") {
    const auto flat = sampled(0.1, 50, [](double) { return 2.0; }, [](double) { return 0.0; });
    const auto r = check_monotone(flat, 0.0);
    CHECK(r.passed);
    CHECK(r.worst_violation == 0.0);

    const auto sine = sampled(0.1, 100, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
    const auto s = check_monotone(sine, 1e-12);
    CHECK_FALSE(s.passed);
    // sin peaks at pi/2, so the first decrease is on the step ending at 1.7
    CHECK(s.detail.find("t=1.7") != std::string::npos);
    CHECK(s.worst_violation > 0.09);
    CHECK(s.worst_violation <= 0.1);

    CHECK(check_monotone(sample_u_rest(2.9, 1e-2, 100.0), 1e-12).passed);
    CHECK_THROWS_AS(check_monotone(Trajectory{}, 0.0), std::invalid_argument);
}

TEST_CASE("proof_integrand_F", "[analysis][proof]") {
    CHECK(proof_integrand_F(0.0, 1.0, pi / 2.0) == 0.0);
    for (double s : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(proof_integrand_F(-s, 1.0, pi / 2.0)) > proof_integrand_F(s, 1.0, pi / 2.0));
        CHECK(proof_integrand_F(s, 1.0, pi / 2.0) > 0.0);
    }
    // theta near pi: P(-s) nearly vanishes at s = sqrt(t), F stays finite
    const double near = proof_integrand_F(-1.0, 1.0, pi - 1e-6);
    CHECK(std::isfinite(near));
    CHECK(near < 0.0);
}

TEST_CASE("proof_integral", "[analysis][proof]") {
    SECTION("negative at (1, pi/2), confirmed by independent rules") {
        const double v = proof_integral(1.0, pi / 2.0);
        CHECK(v < 0.0);
        CHECK_THAT(proof_integral<15>(1.0, pi / 2.0), WithinAbs(v, 1e-12));
        CHECK_THAT(folded_proof_integral(1.0, pi / 2.0), WithinAbs(v, 1e-12));
    }
    SECTION("sampled grid") {
        for (double t : {0.1, 1.0, 10.0, 100.0}) {
            for (double theta : {pi / 6.0, pi / 2.0, 5.0 * pi / 6.0}) {
                const double v = proof_integral(t, theta);
                INFO("t = " << t << ", theta = " << theta);
                CHECK(v < 0.0);
                CHECK_THAT(folded_proof_integral(t, theta), WithinAbs(v, 1e-12 * (1.0 + std::abs(v))));
            }
        }
    }
    SECTION("an even denominator gives zero") {
        auto odd = [](double s) { return s * std::exp(-s * s) / (s * s + 1.0); };
        CHECK_THAT(quadrature::integrate(odd, -9.0, 9.0, {0.0}, 0.0).value, WithinAbs(0.0, 1e-16));
    }
    SECTION("domain") {
        CHECK_THROWS_AS(proof_integral(0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(proof_integral(1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(proof_integral(1.0, pi), std::domain_error);
    }
}

TEST_CASE("proof_integral is negative on the 12 x 12 grid", "[analysis][proof][property]") {
    for (int i = 0; i < 12; ++i) {
        const double t = 1e-2 * std::pow(1e5, i / 11.0);
        for (int j = 1; j <= 12; ++j) {
            const double theta = j * pi / 13.0;
            CHECK(proof_integral(t, theta) < 0.0);
        }
    }
}

TEST_CASE("imag_sqrt_alpha_villat", "[analysis][proof]") {
    for (double kappa : {0.3, 1.0, 2.0, 2.5, 3.2, 3.9}) {
        for (double t : {1e-2, 0.3, 1.0, 20.0, 1e3}) {
            const auto w = imag_sqrt_alpha_villat(t, kappa);
            INFO("kappa = " << kappa << ", t = " << t);
            CHECK(w.direct > 0.0);
            CHECK(w.decomposed > 0.0);
            CHECK_THAT(w.direct, WithinAbs(w.decomposed, 1e-10));
            const auto r = analytic::char_roots(kappa);
            CHECK_THAT(w.theta, WithinAbs(std::arg(r.alpha), 1e-15));
            CHECK_THAT(std::sqrt(kappa) * w.direct / r.alpha.imag(), WithinAbs(analytic::u_rest_derivative(t, kappa), 1e-12));
            // the same quantity is -(cos(theta/2)/pi) times the proof integral
            const double via_proof = -std::cos(0.5 * w.theta) / pi * proof_integral(t, w.theta);
            CHECK_THAT(w.direct, WithinAbs(via_proof, 1e-12));
        }
    }
    CHECK_THROWS_AS(imag_sqrt_alpha_villat(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(imag_sqrt_alpha_villat(1.0, 4.0), std::domain_error);
}

TEST_CASE("cancellation_residual", "[analysis][proof]") {
    for (double t : {1e-2, 1.0, 1e3}) {
        for (double theta : {0.1, 1.0, 3.0}) {
            CHECK(std::abs(cancellation_residual(t, theta)) <= 1e-14 * std::sqrt(t));
        }
    }
}

TEST_CASE("abel_identity_residual", "[analysis][abel]") {
    const auto linear = sampled(1e-3, 2000, [](double t) { return t; }, [](double) { return 1.0; });
    const auto r = abel_identity_residual(linear);
    CHECK(r.passed);
    CHECK(r.worst_violation < 1e-3);

    const auto flat = sampled(1e-3, 200, [](double) { return 0.4; }, [](double) { return 0.0; });
    const auto f = abel_identity_residual(flat);
    CHECK(f.passed);
    CHECK(f.worst_violation == 0.0);

    CHECK(abel_identity_residual(ide::solve_ide(2.0, 0.0, 1e-3, 5.0)).passed);

    // a trajectory whose stored derivative disagrees with its values fails
    const auto wrong = sampled(1e-3, 2000, [](double t) { return 2.0 * t; }, [](double) { return 1.0; });
    CHECK_FALSE(abel_identity_residual(wrong).passed);
}

TEST_CASE("ode_residual", "[analysis][ode_residual]") {
    const auto closed = sample_u_rest(1.0, 1e-3, 10.0);
    CHECK(ode_residual(closed, 1.0, 0.0).passed);

    const auto one = sampled(1e-2, 100, [](double) { return 1.0; }, [](double) { return 0.0; });
    const auto r = ode_residual(one, 1.7, 1.0);
    CHECK(r.passed);
    CHECK(r.worst_violation == 0.0);

    CHECK(ode_residual(ide::solve_ide(2.5, 0.0, 1e-3, 10.0), 2.5, 0.0, 0.1).passed);

    // wrong kappa is detected
    CHECK_FALSE(ode_residual(closed, 2.0, 0.0).passed);
}

TEST_CASE("verification suite passes", "[analysis][suite]") {
    const auto reports = suite::run_all();
    CHECK(reports.size() > 20);
    for (const auto& r : reports) {
        INFO(r.check_id << ": " << r.worst_violation << " vs " << r.tolerance << " " << r.detail);
        CHECK(r.passed);
    }
}
