#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sedsphere/errors.hpp"
#include "sedsphere/special.hpp"
#include "support/mp_oracle.hpp"

using namespace sedsphere;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("faddeeva at the origin", "[special][faddeeva]") {
    const cplx w = special::faddeeva({0.0, 0.0});
    CHECK(w.real() == 1.0);
    CHECK(w.imag() == 0.0);
}

TEST_CASE("faddeeva at -0.5+0.8i against frozen mpmath value", "[special][faddeeva]") {
    // mpmath, 50 digits
    const cplx want{0.43951205215881842255, -0.15908743616654416856};
    CHECK(rel_err(special::faddeeva({-0.5, 0.8}), want) < 1e-13);
    CHECK_THAT(special::faddeeva_re_quadrature(-0.5, 0.8), WithinAbs(want.real(), 1e-11));
    CHECK_THAT(special::faddeeva_im_quadrature(-0.5, 0.8), WithinAbs(want.imag(), 1e-11));
}

TEST_CASE("faddeeva agrees with both quadrature oracles on the 5x5 grid", "[special][faddeeva]") {
    for (int i = 0; i < 5; ++i) {
        for (int j = 1; j <= 5; ++j) {
            const double x = -2.0 + i;
            const double y = 0.4 * j;
            const cplx w = special::faddeeva({x, y});
            INFO("x = " << x << ", y = " << y);
            CHECK_THAT(w.real(), WithinAbs(special::faddeeva_re_quadrature(x, y), 1e-10));
            CHECK_THAT(w.imag(), WithinAbs(special::faddeeva_im_quadrature(x, y), 1e-10));
        }
    }
}

TEST_CASE("faddeeva relative accuracy in the upper half plane", "[special][faddeeva]") {
    // every branch of the region split: tiny, moderate, large and near-axis arguments
    const std::vector<cplx> points{
        {0.01, 0.02}, {-0.05, 0.0},  {0.3, 0.1},   {1.0, 1.0},   {-2.5, 0.5},  {3.0, 1e-3},
        {5.5, 0.05},  {-6.5, 0.2},   {7.5, 0.01},  {0.2, 6.0},   {-1.0, 8.0},  {9.0, 2.0},
        {20.0, 0.5},  {-4.0, 0.0},   {0.0, 3.0},   {2.0, 0.0},   {1e-8, 1e-8}, {-3.3, 3.3}};
    for (const cplx z : points) {
        const cplx want = oracle::to_double(oracle::faddeeva(oracle::from_double(z)));
        INFO("z = " << z);
        CHECK(rel_err(special::faddeeva(z), want) < 1e-12);
    }
}

TEST_CASE("faddeeva in the lower half plane uses the reflection", "[special][faddeeva]") {
    const std::vector<cplx> points{{0.5, -0.5}, {-1.0, -0.3}, {2.0, -1.0}, {0.0, -1.5}, {-3.0, -0.1}};
    for (const cplx z : points) {
        const cplx want = oracle::to_double(oracle::faddeeva(oracle::from_double(z)));
        INFO("z = " << z);
        CHECK(rel_err(special::faddeeva(z), want) < 1e-12);
        const cplx reflected = 2.0 * std::exp(-z * z) - special::faddeeva(-z);
        CHECK(rel_err(special::faddeeva(z), reflected) < 1e-14);
    }
}

TEST_CASE("faddeeva on the imaginary axis is real, positive and decreasing", "[special][faddeeva]") {
    double prev = 2.0;
    for (double y = 0.05; y < 50.0; y *= 1.3) {
        const cplx w = special::faddeeva({0.0, y});
        CHECK(w.imag() == 0.0);
        CHECK(w.real() > 0.0);
        CHECK(w.real() < prev);
        prev = w.real();
    }
}

TEST_CASE("faddeeva rejects non-finite input", "[special][faddeeva]") {
    CHECK_THROWS_AS(special::faddeeva({std::nan(""), 0.0}), std::domain_error);
    CHECK_THROWS_AS(special::faddeeva({0.0, INFINITY}), std::domain_error);
}

TEST_CASE("villat basics", "[special][villat]") {
    CHECK(special::villat({0.0, 0.0}) == cplx{1.0, 0.0});
    CHECK_THROWS_AS(special::villat({-1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(special::villat({NAN, 1.0}), std::domain_error);
    CHECK(special::on_branch_cut({-2.0, 0.0}));
    CHECK_FALSE(special::on_branch_cut({-2.0, 1e-300}));
    CHECK_FALSE(special::on_branch_cut({0.0, 0.0}));
}

TEST_CASE("villat against the multiprecision series", "[special][villat]") {
    for (double r : {0.01, 0.5, 2.0, 10.0, 40.0}) {
        for (double arg : {0.0, 0.7, 1.6, 2.4, 3.0, -1.0, -2.9}) {
            const cplx z = std::polar(r, arg);
            const cplx want = oracle::to_double(oracle::villat(oracle::from_double(z)));
            INFO("z = " << z);
            CHECK(rel_err(special::villat(z), want) < 1e-12);
        }
    }
}

TEST_CASE("villat is conjugate symmetric", "[special][villat]") {
    for (double r : {1e-3, 0.3, 5.0, 300.0, 1e5}) {
        for (double arg : {0.2, 1.0, 2.0, 3.1}) {
            const cplx z = std::polar(r, arg);
            const cplx a = special::villat(std::conj(z));
            const cplx b = std::conj(special::villat(z));
            CHECK(std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b));
        }
    }
}

TEST_CASE("villat stays bounded where the naive product fails", "[special][villat]") {
    const cplx z = std::polar(1e4, 2.0 * pi / 3.0);
    const cplx v = special::villat(z);
    // mpmath, 50 digits
    const cplx want{0.0028212300336823717153, -0.0048860250823748495275};
    CHECK(rel_err(v, want) < 1e-12);
    CHECK(std::abs(v) < 1.0);
    bool naive_failed = false;
    try {
        naive_failed = rel_err(special::naive_villat(z), v) > 1e-3;
    } catch (const std::overflow_error&) {
        naive_failed = true;
    }
    CHECK(naive_failed);
}

TEST_CASE("villat derivative identity against central differences", "[special][villat]") {
    const double step_scale = std::sqrt(std::numeric_limits<double>::epsilon());
    for (double r : {0.2, 1.0, 4.0, 25.0, 400.0}) {
        for (double arg : {0.0, 0.9, 2.0, -1.4, -2.6}) {
            const cplx z = std::polar(r, arg);
            const double step = step_scale * r;
            const cplx fd = (special::villat(z + step) - special::villat(z - step)) / (2.0 * step);
            const cplx exact = special::villat(z) - 1.0 / std::sqrt(pi * z);
            INFO("z = " << z);
            CHECK(rel_err(fd, exact) < 1e-6);
        }
    }
}

TEST_CASE("villat bound on the solution rays", "[special][villat]") {
    for (double t = 1e-3; t <= 1e6; t *= 3.7) {
        for (int j = 1; j < 12; ++j) {
            const double theta = j * pi / 12.0;
            const double bound = 1.0 + 1.0 / std::sqrt(pi * t * std::abs(std::cos(0.5 * theta)));
            CHECK(std::abs(special::villat(std::polar(t, theta))) <= bound);
        }
    }
}

TEST_CASE("villat_asymptotic", "[special][asymptotic]") {
    SECTION("leading order at z = 1e4") {
        const auto a = special::villat_asymptotic({1e4, 0.0}, 0);
        CHECK_THAT(a.value.real(), WithinRel(1.0 / (100.0 * std::sqrt(pi)), 1e-15));
        CHECK_THAT(a.value.real(), WithinRel(5.6419e-3, 1e-4));
        CHECK(rel_err(special::villat_asymptotic({1e4, 0.0}, 6).value, special::villat({1e4, 0.0})) < 1e-6);
    }
    SECTION("error estimate bounds the truncation error") {
        for (int m : {0, 1, 3, 8}) {
            const auto a = special::villat_asymptotic({100.0, 0.0}, m);
            CHECK(std::abs(a.value - special::villat({100.0, 0.0})) <= a.error_estimate);
        }
    }
    SECTION("agrees with villat for |z| >= 1e3") {
        for (double r : {1e3, 3e4, 1e7}) {
            for (double arg : {0.0, 1.0, -2.0, 2.3}) {
                const cplx z = std::polar(r, arg);
                CHECK(rel_err(special::villat_asymptotic(z, 6).value, special::villat(z)) < 1e-6);
            }
        }
    }
    SECTION("guards") {
        CHECK_THROWS_AS(special::villat_asymptotic(std::polar(1e3, 0.75 * pi), 2), accuracy_error);
        CHECK_THROWS_AS(special::villat_asymptotic(std::polar(1e3, -0.8 * pi), 2), accuracy_error);
        CHECK_THROWS_AS(special::villat_asymptotic({2.0, 0.0}, 10), accuracy_error);
        CHECK_THROWS_AS(special::villat_asymptotic({2.0, 0.0}, -1), std::domain_error);
    }
}

TEST_CASE("quadrature oracles", "[special][quadrature]") {
    CHECK_THAT(special::faddeeva_im_quadrature(0.0, 1.3), WithinAbs(0.0, 1e-15));
    // e erfc(1), mpmath
    CHECK_THAT(special::faddeeva_re_quadrature(0.0, 1.0), WithinAbs(0.42758357615580700441, 1e-11));
    CHECK_THROWS_AS(special::faddeeva_re_quadrature(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(special::faddeeva_im_quadrature(1.0, -0.5), std::domain_error);
}

TEST_CASE("naive_villat", "[special][naive]") {
    CHECK(rel_err(special::naive_villat({0.1, 0.0}), special::villat({0.1, 0.0})) < 1e-10);
    CHECK(rel_err(special::naive_villat({0.3, 0.2}), special::villat({0.3, 0.2})) < 1e-10);
    CHECK_THROWS_AS(special::naive_villat({800.0, 0.0}), std::overflow_error);
    CHECK_THROWS_AS(special::naive_villat({-3.0, 0.0}), std::domain_error);

    const cplx z = std::polar(400.0, pi / 3.0);
    const cplx stable = special::villat(z);
    // mpmath, 50 digits
    CHECK(rel_err(stable, {0.024430011794589118774, -0.014069544261723571293}) < 1e-12);
    bool disagrees = false;
    try {
        disagrees = rel_err(special::naive_villat(z), stable) > 1e-3;
    } catch (const std::overflow_error&) {
        disagrees = true;
    }
    CHECK(disagrees);
}
