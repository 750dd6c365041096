#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "restrictlab/ck.hpp"
#include "restrictlab/measures.hpp"
#include "restrictlab/surfaces.hpp"
#include "restrictlab/testfn.hpp"
#include "restrictlab/variation.hpp"

namespace restrictlab::experiments {

/// Exponents of a maximal or variational restriction estimate in dimension d.
struct ExponentTriple {
    /// Throws DomainError unless 1 <= p <= 2, 1 < q < infinity, p < q and rho > p.
    ExponentTriple(int d, double p, double q, double rho);

    int d;
    double p;
    double q;
    double rho;

    double p_conjugate() const;  // infinity for p = 1
    /// p < 2d/(d+1) and q = (d-1)p'/(d+1).
    bool in_sphere_range() const;
    /// p < 2(d-1)/d and q = (d-2)p'/d.
    bool in_cone_range() const;
    /// d >= 3, p <= 2(d+1)/(d+3) and q = 2.
    bool in_tomas_stein() const;
    /// 2p/(p+1), evaluated as 2/(1 + 1/p) so that p = 4/3 gives the double nearest 8/7.
    double p_tilde() const { return 2.0 / (1.0 + 1.0 / p); }
    double q_tilde() const { return 2.0 * q; }
};

struct ScanOptions {
    int resolution = 16;
    int k_min = -4;
    int k_max = 4;
    int points_per_octave = 16;
    double rel_tol = 1e-8;    // for averages that need quadrature
    bool refine = true;       // rerun at doubled resolution and scale density
    double stability_tol = 0.05;
};

struct ScanReport {
    std::string surface;
    std::string measure;
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
    std::vector<double> maximal;    // per node: max over the grid of |f_hat * mu_t|
    std::vector<double> variation;  // per node: rho-variation over the grid
    std::vector<double> single;     // per node: |f_hat * mu_1|
    std::size_t scales = 0;
    double maximal_aggregate = 0.0;
    double variation_aggregate = 0.0;
    double single_aggregate = 0.0;
    double f_norm = 0.0;
    double maximal_ratio = 0.0;
    double variation_ratio = 0.0;
    /// maximal_aggregate <= single_aggregate + variation_aggregate.
    bool mechanism_holds = true;

    bool refined = false;
    double refined_maximal_ratio = 0.0;
    double refined_variation_ratio = 0.0;
    double refinement_change = 0.0;  // largest relative change of the two ratios
    bool stable = true;
};

/// One pass on a fixed quadrature and grid; paths are evaluated per node in parallel.
ScanReport scan_on(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                   const surfaces::SurfaceQuadrature& quad, const variation::ScaleGrid& grid,
                   const ExponentTriple& triple, double rel_tol = 1e-8);

/// Maximal and variational aggregates over the dyadic grid
/// 2^k_min .. 2^k_max, with a refinement pass (doubled surface resolution and
/// scale density) whose ratios must agree within stability_tol.
ScanReport maximal_variational_scan(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                    const surfaces::SurfaceSpec& surface, const ExponentTriple& triple,
                                    const ScanOptions& options = {});

struct DilationCheck {
    double lambda = 1.0;
    double base_ratio = 0.0;
    double dilated_ratio = 0.0;
    double predicted_factor = 0.0;  // lambda^((d-1)/q - d/p')
    double rel_error = 0.0;
};

/// Replaces f by f(lambda .), the surface by its lambda-dilate (nodes times
/// lambda, weights times lambda^(d-1)) and the grid by lambda times the grid.
/// The averages then scale by exactly lambda^-d, so the maximal ratio scales
/// by lambda^((d-1)/q - d/p').
DilationCheck dilation_covariance(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                  const surfaces::SurfaceQuadrature& quad, const variation::ScaleGrid& grid,
                                  const ExponentTriple& triple, double lambda);

struct KnappReport {
    int d = 2;
    double p = 0.0;
    double q = 0.0;
    double threshold = 0.0;  // (d-1)p'/(d+1)
    std::vector<double> deltas;
    std::vector<double> ratios;  // ||f_hat_delta||_(L^q(cap)) / ||f_delta||_p
    double slope = 0.0;
    double predicted_slope = 0.0;  // (d-1)/q - (d+1)/p'
    double residual = 0.0;
    bool predicted_bounded = false;
    std::string verdict;  // "bounded-consistent" or "unbounded-consistent"
};

/// Knapp packet for a delta-cap of the sphere around the north pole e_d:
/// spatial width 1/delta tangentially and 1/delta^2 normally, modulated by e_d.
testfn::GaussianPacket knapp_packet(int d, double delta);

/// Log-log slope of the restriction ratio over `deltas`. Needs at least six
/// decreasing values in (0, 1/4] (DomainError) and a fit residual below 0.05
/// (FitError). Slope >= -0.01 is read as bounded-consistent.
KnappReport knapp_scan(int d, double p, double q, const std::vector<double>& deltas, int resolution = 64);

struct SquareFunctionOptions {
    int t_per_octave = 8;
    double t_max = 1e3;
    int radial_nodes = 24;
    int shell_resolution = 48;
};

struct SquareFunctionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double c_restr_empirical = 0.0;
    double bound = 0.0;  // (ln sqrt2)^(1/p)
    bool pass = true;
    std::size_t t_nodes = 0;
};

/// lhs = || (int |f_hat * psi_t|^p dt/t)^(1/p) ||_(L^q(S, sigma)) with psi_hat = phi,
/// rhs = C * sup|phi| * ||f||_p where C is the largest ratio
/// ||(f psi_check(t .))^||_q / ||f psi_check(t .)||_p over the t-nodes. The
/// t-integral runs over [1/R_f, t_max] with R_f the radius beyond which f is
/// negligible; each t only sees the shell 1 <= t|x| <= sqrt2.
SquareFunctionReport square_function_check(const testfn::TestFunction& f, const ck::AnnularBump& phi,
                                           const surfaces::SurfaceQuadrature& quad, double p, double q,
                                           const SquareFunctionOptions& options = {});

/// max over `count` seeded radii of int |phi(t r)|^p dt/t / (sup|phi|^p ln sqrt2); at most 1.
double scalar_square_step(const ck::AnnularBump& phi, double p, std::uint64_t seed, int count = 100);

struct LebesgueReport {
    std::vector<double> eps;
    std::vector<double> errors;  // |average(f, mu_eps, omega) / mu(R^d) - f_hat(omega)|
    bool exact = false;          // every error is zero
    bool monotone = true;
    double slope = 0.0;
    double residual = 0.0;
};

LebesgueReport lebesgue_point_experiment(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                         const Eigen::VectorXd& omega, const std::vector<double>& eps_grid,
                                         double rel_tol = 1e-12);

struct SquaredTrickReport {
    explicit SquaredTrickReport(testfn::GaussianPacket packet) : h(std::move(packet)) {}

    testfn::GaussianPacket h;
    double transform_error = 0.0;  // max |h_hat - |f_hat|^2| over the sampled frequencies
    double p_tilde = 0.0;
    double q_tilde = 0.0;
    double h_norm = 0.0;           // ||h||_p
    double young_bound = 0.0;      // ||f||_(p~)^2
    bool young_holds = true;
    double certificate = 0.0;      // sqrt(maximal aggregate of h) / ||f||_(p~)
    ScanReport scan;
};

/// h = f * conj(f(-.)), a packet with width sqrt2 W, center 0 and the same
/// modulation. Throws DomainError unless f is a single packet.
testfn::GaussianPacket autocorrelation(const testfn::GaussianPacket& f);

SquaredTrickReport squared_average_trick(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                         const surfaces::SurfaceSpec& surface, const ExponentTriple& triple,
                                         const ScanOptions& options, std::uint64_t seed);

}  // namespace restrictlab::experiments
