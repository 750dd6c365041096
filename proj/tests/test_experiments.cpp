#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "restrictlab/errors.hpp"
#include "restrictlab/experiments.hpp"
#include "restrictlab/numerics.hpp"

using namespace restrictlab;
using experiments::ExponentTriple;
using testfn::GaussianPacket;

TEST_CASE("exponent triples") {
    CHECK(ExponentTriple(2, 4.0 / 3.0, 3.0, 2.0).p_tilde() == 8.0 / 7.0);
    CHECK(ExponentTriple(2, 1.5, 3.0, 2.0).q_tilde() == 6.0);
    CHECK(std::isinf(ExponentTriple(2, 1.0, 2.0, 2.0).p_conjugate()));
    CHECK(ExponentTriple(3, 1.2, 3.0, 2.0).in_sphere_range());
    CHECK_FALSE(ExponentTriple(3, 1.2, 3.5, 2.0).in_sphere_range());
    CHECK(ExponentTriple(3, 1.2, 2.0, 2.0).in_cone_range());
    CHECK_FALSE(ExponentTriple(2, 1.2, 2.0, 2.0).in_cone_range());
    CHECK(ExponentTriple(3, 4.0 / 3.0, 2.0, 2.0).in_tomas_stein());
    CHECK_FALSE(ExponentTriple(3, 1.4, 2.0, 2.0).in_tomas_stein());
    CHECK_THROWS_AS(ExponentTriple(2, 1.5, 1.5, 2.0), DomainError);
    CHECK_THROWS_AS(ExponentTriple(2, 1.5, 3.0, 1.2), DomainError);
    CHECK_THROWS_AS(ExponentTriple(2, 2.5, 3.0, 3.0), DomainError);
}

TEST_CASE("scan mechanism and refinement") {
    const ExponentTriple t(2, 1.0, 2.0, 2.0);
    experiments::ScanOptions opt;
    opt.resolution = 8;
    opt.points_per_octave = 8;
    const auto f = GaussianPacket::standard(2);
    const auto rep = experiments::maximal_variational_scan(f, measures::AveragingMeasure::gaussian(2),
                                                           surfaces::Sphere{2}, t, opt);
    CHECK(rep.mechanism_holds);
    CHECK(rep.stable);
    CHECK(rep.refined);
    CHECK(rep.scales == 65);
    for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
        CHECK(rep.maximal[i] <= rep.single[i] + rep.variation[i] + 1e-12);
        CHECK(rep.maximal[i] >= rep.single[i] - 1e-15);
    }
    // On the unit circle the radial Gaussian gives one value per node:
    // sup_t (1 + t^2)^-1 exp(-pi / (1 + t^2)) over the grid.
    double best = 0.0;
    for (double s : variation::ScaleGrid::dyadic(-4, 4, 8).scales()) {
        best = std::max(best, std::exp(-oracles::kPi / (1.0 + s * s)) / (1.0 + s * s));
    }
    CHECK(rep.maximal[0] == doctest::Approx(best).epsilon(1e-10));
    CHECK(rep.maximal_aggregate == doctest::Approx(best * std::sqrt(2.0 * oracles::kPi)).epsilon(1e-10));
}

TEST_CASE("point mass scans have no variation") {
    const ExponentTriple t(3, 1.0, 2.0, 2.0);
    experiments::ScanOptions opt;
    opt.resolution = 4;
    opt.points_per_octave = 2;
    opt.refine = false;
    const auto rep = experiments::maximal_variational_scan(GaussianPacket::standard(3),
                                                           measures::AveragingMeasure::point_mass(3),
                                                           surfaces::ParaboloidPatch{3, 1.0}, t, opt);
    CHECK(rep.variation_aggregate == 0.0);
    CHECK(rep.maximal_aggregate == doctest::Approx(rep.single_aggregate).epsilon(1e-15));
}

TEST_CASE("dilation covariance") {
    const ExponentTriple t(2, 1.2, 3.0, 2.0);
    const auto quad = surfaces::quadrature(surfaces::Sphere{2}, 12);
    const auto grid = variation::ScaleGrid::dyadic(-4, 4, 8);
    Eigen::MatrixXd w(2, 2);
    w << 0.9, 0.2, 0.2, 1.1;
    const GaussianPacket f(Eigen::Vector2d(0.2, -0.1), w, Eigen::Vector2d(0.5, 0.0));
    for (double lambda : {0.5, 2.0}) {
        const auto chk = experiments::dilation_covariance(f, measures::AveragingMeasure::gaussian(2), quad, grid, t, lambda);
        CHECK(chk.predicted_factor == doctest::Approx(std::pow(lambda, 1.0 / 3.0 - 2.0 / 6.0)));
        CHECK(chk.rel_error <= 0.01);
    }
    // The ball goes through the lattice route, so a coarse setup keeps it quick.
    const ExponentTriple t4(2, 1.5, 4.0, 2.0);
    const auto chk = experiments::dilation_covariance(f, measures::AveragingMeasure::unit_ball(2),
                                                      surfaces::quadrature(surfaces::Sphere{2}, 3),
                                                      variation::ScaleGrid::dyadic(-1, 1, 2), t4, 2.0);
    CHECK(chk.predicted_factor == doctest::Approx(std::pow(2.0, 0.25 - 2.0 / 3.0)));
    CHECK(chk.rel_error <= 0.01);
}

TEST_CASE("Knapp packets and verdicts") {
    for (int d : {2, 3}) {
        const double delta = 0.125;
        const auto f = experiments::knapp_packet(d, delta);
        Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
        pole[d - 1] = 1.0;
        CHECK(std::abs(f.fourier(pole) - 1.0) < 1e-12);
    }
    std::vector<double> deltas;
    for (int e = 2; e <= 7; ++e) deltas.push_back(std::exp2(-e));
    const double p = 4.0 / 3.0;
    CHECK(experiments::knapp_scan(2, p, 1.2, deltas).verdict == "bounded-consistent");
    CHECK(experiments::knapp_scan(2, p, 1.5, deltas).verdict == "unbounded-consistent");
    const auto at = experiments::knapp_scan(2, p, p, deltas);
    CHECK(at.threshold == doctest::Approx(p));
    CHECK(std::fabs(at.slope) <= 0.02);
    const auto d3 = experiments::knapp_scan(3, 1.2, 2.0, deltas, 24);
    CHECK(d3.slope == doctest::Approx(d3.predicted_slope).epsilon(0.05));
    CHECK_THROWS_AS(experiments::knapp_scan(2, p, 2.0, {0.25, 0.125, 0.0625}), DomainError);
    CHECK_THROWS_AS(experiments::knapp_scan(2, p, 2.0, {0.5, 0.25, 0.125, 0.0625, 0.03, 0.01}), DomainError);
}

TEST_CASE("Lebesgue point rate and its Taylor constant") {
    const auto eps = numerics::logspace(1e-1, 1e-3, 9);
    const auto rep = experiments::lebesgue_point_experiment(GaussianPacket::standard(2),
                                                            measures::AveragingMeasure::unit_ball(2),
                                                            Eigen::Vector2d(1.0, 0.0), eps);
    CHECK_FALSE(rep.exact);
    CHECK(rep.monotone);
    CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.05));
    // err ~ eps^2 / (2 (d + 2)) * Laplacian of exp(-pi |x|^2) at |x| = 1.
    const double c = (4.0 * oracles::kPi * oracles::kPi - 4.0 * oracles::kPi) * std::exp(-oracles::kPi) / 8.0;
    CHECK(rep.errors.back() / (eps.back() * eps.back()) == doctest::Approx(c).epsilon(0.02));
    const auto flat = experiments::lebesgue_point_experiment(GaussianPacket::standard(2),
                                                             measures::AveragingMeasure::point_mass(2),
                                                             Eigen::Vector2d(1.0, 0.0), eps);
    CHECK(flat.exact);
}

TEST_CASE("squared-average trick") {
    const auto f = GaussianPacket::standard(2);
    const auto h = experiments::autocorrelation(f);
    for (double y : {0.0, 0.3, 1.1}) {
        const Eigen::Vector2d v(y, -0.5 * y);
        CHECK(std::abs(h.fourier(v) - std::exp(-2.0 * oracles::kPi * v.squaredNorm())) < 1e-14);
    }
    Eigen::MatrixXd w(2, 2);
    w << 1.2, -0.3, -0.3, 0.7;
    const GaussianPacket g(Eigen::Vector2d(0.4, 0.1), w, Eigen::Vector2d(0.2, -0.6), {0.5, 0.5});
    experiments::ScanOptions opt;
    opt.resolution = 8;
    opt.points_per_octave = 4;
    const auto rep = experiments::squared_average_trick(g, measures::AveragingMeasure::gaussian(2), surfaces::Sphere{2},
                                                        ExponentTriple(2, 4.0 / 3.0, 3.0, 2.0), opt, 5);
    CHECK(rep.transform_error <= 1e-8);
    CHECK(rep.p_tilde == 8.0 / 7.0);
    CHECK(rep.q_tilde == 6.0);
    CHECK(rep.young_holds);
    CHECK(rep.h_norm <= rep.young_bound * (1.0 + 1e-9));
    const testfn::TestFunction two({f, f});
    CHECK_THROWS_AS(experiments::squared_average_trick(two, measures::AveragingMeasure::gaussian(2), surfaces::Sphere{2},
                                                       ExponentTriple(2, 1.0, 2.0, 2.0), opt, 1),
                    DomainError);
}

TEST_CASE("square function") {
    const ck::AnnularBump phi(2);
    for (double p : {1.0, 1.5}) {
        CHECK(experiments::scalar_square_step(phi, p, 3) <= 1.0 + 1e-9);
    }
    const auto quad = surfaces::quadrature(surfaces::Sphere{2}, 12);
    const auto rep = experiments::square_function_check(GaussianPacket::standard(2), phi, quad, 1.2, 3.0);
    CHECK(rep.pass);
    CHECK(rep.ratio <= rep.bound * 1.02);
    CHECK(rep.bound == doctest::Approx(std::pow(std::log(std::sqrt(2.0)), 1.0 / 1.2)));
}
