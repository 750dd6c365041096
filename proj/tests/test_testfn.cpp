#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/testfn.hpp"

using namespace restrictlab;
using testfn::Complex;
using testfn::GaussianPacket;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v) x[i++] = a;
    return x;
}

GaussianPacket skew_packet_2d() {
    Eigen::MatrixXd w(2, 2);
    w << 1.3, 0.4, 0.4, 0.8;
    return GaussianPacket(vec({0.3, -0.2}), w, vec({0.5, 0.25}), Complex(0.7, -0.4));
}

}  // namespace

TEST_CASE("closed-form transform matches direct integration in 1D") {
    Eigen::MatrixXd w(1, 1);
    w << 0.8;
    const GaussianPacket f(vec({0.4}), w, vec({1.1}), Complex(1.0, 0.5));
    for (double y : {-1.0, 0.0, 0.6, 1.1, 2.3}) {
        auto part = [&](bool imag) {
            return oracles::adaptive(
                [&](double x) {
                    const Complex v = f(vec({x})) * std::exp(Complex(0.0, -2.0 * oracles::kPi * x * y));
                    return imag ? v.imag() : v.real();
                },
                -12.0, 12.0);
        };
        const Complex ref(part(false), part(true));
        CHECK(std::abs(testfn::ft_exact(f, vec({y})) - ref) < 1e-10);
    }
}

TEST_CASE("closed-form transform matches a 2D product rule") {
    const auto f = skew_packet_2d();
    const auto rule = numerics::gauss_legendre(120, -9.0, 9.0);
    const auto y = vec({0.2, 0.9});
    Complex ref = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const auto x = vec({rule.nodes[i], rule.nodes[j]});
            ref += rule.weights[i] * rule.weights[j] * f(x) * std::exp(Complex(0.0, -2.0 * oracles::kPi * x.dot(y)));
        }
    }
    CHECK(std::abs(testfn::ft_exact(f, y) - ref) < 1e-10);
}

TEST_CASE("standard Gaussian is self-dual") {
    const auto f = GaussianPacket::standard(3);
    const auto y = vec({0.3, 0.1, -0.5});
    CHECK(std::abs(f.fourier(y) - std::exp(-oracles::kPi * y.squaredNorm())) < 1e-15);
}

TEST_CASE("Lp norms") {
    Eigen::MatrixXd w(1, 1);
    w << 0.6;
    const GaussianPacket f(vec({1.0}), w, vec({3.0}), Complex(2.0, 0.0));
    for (double p : {1.0, 4.0 / 3.0, 2.0}) {
        const double ref = std::pow(oracles::adaptive([&](double x) { return std::pow(std::abs(f(vec({x}))), p); },
                                                       -15.0, 15.0),
                                    1.0 / p);
        CHECK(testfn::lp_norm(f, p) == doctest::Approx(ref).epsilon(1e-10));
    }
    // Superposition route: two separated copies have twice the p-th power.
    const auto unit = GaussianPacket::isotropic(1, 1.0);
    const testfn::TestFunction pair({unit, GaussianPacket(vec({20.0}), Eigen::MatrixXd::Identity(1, 1), vec({0.0}))});
    const double single = testfn::lp_norm(unit, 1.5);
    CHECK(testfn::lp_norm(pair, 1.5) == doctest::Approx(std::pow(2.0, 1.0 / 1.5) * single).epsilon(1e-7));
    CHECK_THROWS_AS(testfn::lp_norm(f, 2.5), DomainError);
}

TEST_CASE("Gaussian average closed form") {
    for (int d : {1, 2, 3}) {
        const auto f = GaussianPacket::standard(d);
        for (double t : {0.25, 1.0, 4.0}) {
            const testfn::ScaledMeasureAverage avg(measures::AveragingMeasure::gaussian(d), t);
            const Complex v = testfn::average(f, avg, Eigen::VectorXd::Zero(d));
            CHECK(std::abs(v - std::pow(1.0 + t * t, -d / 2.0)) < 1e-12);
        }
    }
}

TEST_CASE("fast Gaussian path agrees with the lattice route") {
    const auto f = skew_packet_2d();
    const testfn::ScaledMeasureAverage avg(measures::AveragingMeasure::gaussian(2), 0.7);
    const auto xi = vec({0.4, -0.3});
    CHECK(std::abs(testfn::average(f, avg, xi) - testfn::average_by_quadrature(f, avg, xi, 1e-10)) < 1e-9);
}

TEST_CASE("ball average agrees with direct convolution over the ball") {
    // (f_hat * mu_t)(xi) = int_{|y| <= 1} f_hat(xi - t y) dy in polar coordinates.
    const auto f = skew_packet_2d();
    const double t = 0.6;
    const auto xi = vec({0.5, 0.2});
    const auto radial = numerics::gauss_legendre(60, 0.0, 1.0);
    const int n_theta = 200;
    Complex ref = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double rho = radial.nodes[i];
        for (int k = 0; k < n_theta; ++k) {
            const double th = 2.0 * oracles::kPi * k / n_theta;
            const auto y = vec({rho * std::cos(th), rho * std::sin(th)});
            ref += radial.weights[i] * rho * (2.0 * oracles::kPi / n_theta) * testfn::ft_exact(f, xi - t * y);
        }
    }
    const testfn::ScaledMeasureAverage avg(measures::AveragingMeasure::unit_ball(2), t);
    CHECK(std::abs(testfn::average(f, avg, xi, 1e-10) - ref) < 1e-8);
}

TEST_CASE("point mass average is the transform") {
    const auto f = skew_packet_2d();
    const testfn::ScaledMeasureAverage avg(measures::AveragingMeasure::point_mass(2), 3.0);
    const auto xi = vec({0.1, 0.2});
    CHECK(testfn::average(f, avg, xi) == testfn::ft_exact(f, xi));
}

TEST_CASE("dilation") {
    const auto f = skew_packet_2d();
    const auto g = f.dilated(2.0);
    const auto x = vec({0.1, -0.3});
    CHECK(std::abs(g(x) - f(2.0 * x)) < 1e-15);
    // g_hat(y) = 2^-d f_hat(y / 2)
    CHECK(std::abs(g.fourier(x) - 0.25 * f.fourier(0.5 * x)) < 1e-14);
}

TEST_CASE("invalid packets") {
    Eigen::MatrixXd w(2, 2);
    w << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(GaussianPacket(vec({0, 0}), w, vec({0, 0})), DomainError);
    w << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianPacket(vec({0, 0}), w, vec({0, 0})), DomainError);
    CHECK_THROWS_AS(testfn::ScaledMeasureAverage(measures::AveragingMeasure::gaussian(2), 0.0), DomainError);
    CHECK_THROWS_AS(testfn::ft_exact(skew_packet_2d(), vec({1.0})), ShapeError);
    CHECK_THROWS_AS(testfn::TestFunction(std::vector<GaussianPacket>{}), DomainError);
}
