#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "rqmc/numerics.hpp"

using Catch::Approx;
using rqmc::inv_norm_cdf;

TEST_CASE("inv_norm_cdf known values", "[numerics]") {
    CHECK(inv_norm_cdf(0.5) == 0.0);
    // Bisection against the long-double erf oracle: 1.9599639845400542...
    const double oracle = static_cast<double>(oracle::inv_phi_bisect(0.975));
    CHECK(std::abs(oracle - 1.9599639845400542) < 1e-12);
    CHECK(std::abs(inv_norm_cdf(0.975) - oracle) < 1e-12);
    for (double p : {0.1, 0.01, 0.001}) {
        CHECK(std::abs(inv_norm_cdf(1.0 - p) + inv_norm_cdf(p)) < 1e-12);
    }
}

TEST_CASE("inv_norm_cdf rejects probabilities outside (0,1)", "[numerics]") {
    for (double p : {0.0, 1.0, -0.25, 1.5, std::nan("")}) {
        CHECK_THROWS_AS(inv_norm_cdf(p), std::domain_error);
    }
}

TEST_CASE("inv_norm_cdf is strictly increasing", "[numerics][property]") {
    double prev = -HUGE_VAL;
    for (int k = 1; k < 20000; ++k) {
        const double z = inv_norm_cdf(k / 20000.0);
        REQUIRE(z > prev);
        prev = z;
    }
    prev = -HUGE_VAL;
    for (double e = -300; e < -1; e += 0.25) {
        const double z = inv_norm_cdf(std::pow(10.0, e));
        REQUIRE(z > prev);
        prev = z;
    }
}

TEST_CASE("inv_norm_cdf round trip through an independent CDF", "[numerics][property]") {
    std::vector<double> grid;
    for (double e = -12.0; e <= std::log10(0.5); e += 0.05) {
        const double p = std::pow(10.0, e);
        grid.push_back(p);
        grid.push_back(1.0 - p);
    }
    for (double p : grid) {
        const long double back = oracle::phi_cdf(inv_norm_cdf(p));
        INFO("p = " << p);
        REQUIRE(std::fabs(back - static_cast<long double>(p)) <= 1e-12L);
    }
}

TEST_CASE("inv_norm_cdf absolute error below 1e-8 down to 1e-15", "[numerics][property]") {
    for (double e = -15.0; e <= std::log10(0.5); e += 0.1) {
        for (double p : {std::pow(10.0, e), 1.0 - std::pow(10.0, e)}) {
            if (!(p > 0.0 && p < 1.0)) continue;
            const long double z = oracle::inv_phi_bisect(p);
            INFO("p = " << p);
            REQUIRE(std::fabs(inv_norm_cdf(p) - z) <= 1e-8L);
        }
    }
}

TEST_CASE("gamma_fn at half integers", "[numerics]") {
    using rqmc::gamma_fn;
    CHECK(gamma_fn(1.0) == 1.0);
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == Approx(1.7724538509055160).epsilon(1e-13));
    // Gamma(5/2) = (3/2)(1/2) sqrt(pi)
    CHECK(gamma_fn(2.5) == Approx(0.75 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gamma_fn(2.5) == Approx(1.3293403881791355).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == 24.0);

    for (double x = 0.5; x <= 6.0; x += 0.5) {
        CHECK(gamma_fn(x + 1.0) == Approx(x * gamma_fn(x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(0.3), std::invalid_argument);
}

TEST_CASE("quad_semi_infinite closed forms", "[numerics]") {
    using rqmc::quad_semi_infinite;
    const double sqrt_pi = std::sqrt(std::numbers::pi);

    auto r1 = quad_semi_infinite([](double r) { return std::exp(-r); }, 1e-12);
    CHECK(std::abs(r1.value - 1.0) <= 1e-12);
    CHECK(r1.abs_error_estimate >= 0.0);
    CHECK(r1.evaluations >= 1);

    auto r2 = quad_semi_infinite([](double r) { return std::exp(-r * r); }, 1e-12);
    CHECK(std::abs(r2.value - 0.5 * sqrt_pi) <= 1e-12);

    auto r3 = quad_semi_infinite([](double r) { return std::cos(r) * std::exp(-r * r); }, 1e-12);
    CHECK(std::abs(r3.value - 0.5 * sqrt_pi * std::exp(-0.25)) <= 1e-12);
    CHECK(r3.value == Approx(0.6901942).epsilon(1e-7));
}

TEST_CASE("quad_semi_infinite Gaussian moments", "[numerics][property]") {
    for (int k = 0; k <= 8; ++k) {
        auto r = rqmc::quad_semi_infinite([k](double x) { return std::pow(x, k) * std::exp(-x * x); }, 1e-12);
        INFO("k = " << k);
        CHECK(std::abs(r.value - 0.5 * rqmc::gamma_fn(0.5 * (k + 1))) <= 1e-10);
        CHECK(r.abs_error_estimate <= std::max(1e-12, r.abs_error_estimate));
    }
}

TEST_CASE("quad_semi_infinite reports budget exhaustion", "[numerics]") {
    rqmc::QuadratureOptions opts;
    opts.max_evaluations = 100;
    try {
        rqmc::quad_semi_infinite([](double r) { return std::sin(200.0 * r) * std::exp(-0.01 * r * r); }, 1e-14,
                                 opts);
        FAIL("expected convergence_error");
    } catch (const rqmc::convergence_error& e) {
        CHECK(e.best_estimate().evaluations >= 1);
        CHECK(e.best_estimate().abs_error_estimate > 1e-14);
    }
    CHECK_THROWS_AS(rqmc::quad_semi_infinite([](double) { return 0.0; }, 0.0), std::invalid_argument);
}
