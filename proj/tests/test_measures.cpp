#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "restrictlab/errors.hpp"
#include "restrictlab/measures.hpp"
#include "restrictlab/numerics.hpp"

using namespace restrictlab;
using measures::AveragingMeasure;

TEST_CASE("transforms agree with the slice-projection oracle") {
    struct Case {
        const char* kind;
        int d;
    };
    for (const Case c : {Case{"ball", 2}, Case{"ball", 3}, Case{"ball", 5}, Case{"sphere", 4}, Case{"sphere", 6}}) {
        const auto mu = measures::measure_from_name(c.kind, c.d);
        for (double r : {0.0, 0.05, 0.4, 1.3, 3.7, 9.2}) {
            const double ref = oracles::slice_transform(c.kind, c.d, r);
            CAPTURE(c.kind);
            CAPTURE(c.d);
            CAPTURE(r);
            CHECK(measures::mu_hat_radial(mu, r) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("total mass and the Gaussian") {
    CHECK(AveragingMeasure::unit_ball(3).total_mass() == doctest::Approx(4.0 * oracles::kPi / 3.0));
    CHECK(AveragingMeasure::unit_sphere(4).total_mass() == doctest::Approx(2.0 * oracles::kPi * oracles::kPi));
    const auto g = AveragingMeasure::gaussian(3);
    CHECK(g.total_mass() == doctest::Approx(1.0));
    CHECK(measures::mu_hat_radial(g, 0.7) == doctest::Approx(std::exp(-oracles::kPi * 0.49)));
    const auto p = AveragingMeasure::point_mass(2);
    CHECK(measures::mu_hat_radial(p, 5.0) == 1.0);
    CHECK(measures::mu_hat_radial_derivative(p, 5.0) == 0.0);
}

TEST_CASE("dilation rescales the argument") {
    const auto mu = AveragingMeasure::unit_ball(2);
    CHECK(measures::mu_hat_radial(mu.dilated(2.5), 0.8) == doctest::Approx(measures::mu_hat_radial(mu, 2.0)));
}

TEST_CASE("radial derivative matches central differences") {
    for (const char* kind : {"gaussian", "ball", "sphere"}) {
        for (int d : {4, 5}) {
            const auto mu = measures::measure_from_name(kind, d);
            for (double r : {0.01, 0.3, 2.2, 4.9, 30.0}) {
                const double h = 1e-5;
                const double fd =
                    (measures::mu_hat_radial(mu, r + h) - measures::mu_hat_radial(mu, r - h)) / (2.0 * h);
                CAPTURE(kind);
                CAPTURE(r);
                CHECK(measures::mu_hat_radial_derivative(mu, r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
        }
    }
    CHECK(measures::mu_hat_radial_derivative(AveragingMeasure::unit_ball(3), 0.0) == 0.0);
}

TEST_CASE("gradient is radial") {
    const auto mu = AveragingMeasure::unit_ball(3);
    Eigen::VectorXd x(3);
    x << 0.3, -1.1, 0.7;
    const auto g = measures::grad_mu_hat(mu, x);
    const double dr = measures::mu_hat_radial_derivative(mu, x.norm());
    CHECK((g - dr * x / x.norm()).norm() < 1e-14);
    CHECK_THROWS_AS(measures::grad_mu_hat(mu, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST_CASE("documented decay certificate holds on dense radii") {
    for (const char* kind : {"gaussian", "ball", "sphere"}) {
        for (int d : {4, 5}) {
            const auto mu = measures::measure_from_name(kind, d);
            const auto dc = measures::documented_decay(mu);
            int bad = 0;
            for (double r : numerics::logspace(1e-3, 1e3, 10000)) {
                const double g = std::fabs(measures::mu_hat_radial_derivative(mu, r));
                if (g > dc.D * std::pow(1.0 + r, -1.0 - dc.eta)) ++bad;
            }
            CAPTURE(kind);
            CHECK(bad == 0);
        }
    }
    CHECK(measures::documented_decay(AveragingMeasure::unit_ball(2)).eta == 0.5);
    CHECK(measures::documented_decay(AveragingMeasure::unit_sphere(5)).eta == 1.0);
}

TEST_CASE("fitted exponents") {
    const auto ball = measures::decay_profile(AveragingMeasure::unit_ball(3), 10.0, 100.0, 200);
    CHECK(ball.eta_est == doctest::Approx(1.0).epsilon(0.1));
    const auto sph = measures::decay_profile(AveragingMeasure::unit_sphere(4), 10.0, 100.0, 200);
    CHECK(sph.eta_est == doctest::Approx(0.5).epsilon(0.2));
    CHECK(std::fabs(sph.eta_est - 0.5) <= 0.1);
    const auto pt = measures::decay_profile(AveragingMeasure::point_mass(3), 10.0, 100.0, 200);
    CHECK(std::isinf(pt.eta_est));
    CHECK(pt.D_est == 0.0);
}

TEST_CASE("invalid measures") {
    CHECK_THROWS_AS(AveragingMeasure::unit_ball(1), DomainError);
    CHECK_THROWS_AS(AveragingMeasure::unit_sphere(3), DomainError);
    CHECK_THROWS_AS(measures::measure_from_name("cube", 3), DomainError);
}
