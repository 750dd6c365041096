#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "restrictlab/errors.hpp"
#include "restrictlab/specfun.hpp"

using namespace restrictlab;

TEST_CASE("gamma at integers and half integers") {
    CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(specfun::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(specfun::gamma(0.5) == doctest::Approx(std::sqrt(oracles::kPi)).epsilon(1e-15));
    CHECK(specfun::gamma(3.5) == doctest::Approx(15.0 / 8.0 * std::sqrt(oracles::kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(specfun::gamma(0.0), DomainError);
    CHECK_THROWS_AS(specfun::gamma(-1.5), DomainError);
}

TEST_CASE("bessel_j matches the 50-digit series on both branches") {
    double worst = 0.0;
    for (int twice = 0; twice <= 20; ++twice) {
        const double alpha = 0.5 * twice;
        for (int i = 1; i <= 500; ++i) {
            const double z = 0.1 * i + 0.0137;
            const double ref = oracles::bessel_series(alpha, z);
            if (std::fabs(ref) < 1e-280) continue;
            worst = std::max(worst, std::fabs(specfun::bessel_j(alpha, z) - ref) / std::fabs(ref));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("half-integer closed forms") {
    for (double z : {0.3, 1.0, 7.5, 17.9, 18.1, 33.0, 50.0}) {
        const double s = std::sqrt(2.0 / (oracles::kPi * z));
        CHECK(specfun::bessel_j(0.5, z) == doctest::Approx(s * std::sin(z)).epsilon(1e-10));
        CHECK(specfun::bessel_j(1.5, z) == doctest::Approx(s * (std::sin(z) / z - std::cos(z))).epsilon(1e-10));
    }
}

TEST_CASE("values at the origin") {
    CHECK(specfun::bessel_j(0.0, 0.0) == 1.0);
    CHECK(specfun::bessel_j(2.5, 0.0) == 0.0);
    for (double alpha : {0.0, 0.5, 1.0, 4.5}) {
        CHECK(specfun::bessel_j_scaled(alpha, 0.0) ==
              doctest::Approx(1.0 / std::tgamma(alpha + 1.0)).epsilon(1e-15));
    }
    // The scaled form stays accurate where J itself underflows toward zero.
    const double z = 1e-3;
    CHECK(specfun::bessel_j_scaled(3.0, z) * std::pow(z / 2.0, 3.0) ==
          doctest::Approx(oracles::bessel_series(3.0, z)).epsilon(1e-12));
}

TEST_CASE("large-argument envelope") {
    for (double alpha = 0.0; alpha <= 5.0; alpha += 0.5) {
        for (double z = 10.0; z <= 200.0; z += 0.37) {
            CHECK(std::fabs(specfun::bessel_j(alpha, z)) * std::sqrt(z) <= 1.0);
        }
    }
}

TEST_CASE("domain and policy errors") {
    CHECK_THROWS_AS(specfun::bessel_j(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_j(10.5, 1.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_j(1.0, -1.0), DomainError);
    specfun::BesselEvalPolicy bad;
    bad.series_terms = 5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    specfun::BesselEvalPolicy tight;
    tight.series_terms = 20;
    tight.switchover_argument = 60.0;
    CHECK_THROWS_AS(specfun::bessel_j(0.0, 55.0, tight), AccuracyError);
}
