#include "restrictlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"

namespace restrictlab::experiments {

namespace {

using Complex = std::complex<double>;

bool same_exponent(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

double relative_change(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale > 0.0 ? std::fabs(a - b) / scale : 0.0;
}

// Radius outside of which every packet of f is below 1e-12 of its peak.
double effective_radius(const testfn::TestFunction& f) {
    double r = 0.0;
    for (const auto& g : f.packets()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.width());
        const double w_max = eig.eigenvalues().maxCoeff();
        r = std::max(r, g.center().norm() + 3.0 * w_max);
    }
    return r;
}

}  // namespace

ExponentTriple::ExponentTriple(int d_, double p_, double q_, double rho_) : d(d_), p(p_), q(q_), rho(rho_) {
    if (d < 1) throw DomainError("ExponentTriple: dimension must be positive");
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("ExponentTriple: p must lie in [1, 2]");
    if (!(q > 1.0) || std::isinf(q)) throw DomainError("ExponentTriple: q must lie in (1, infinity)");
    if (!(p < q)) throw DomainError("ExponentTriple: need p < q");
    if (!(rho > p) || std::isinf(rho)) throw DomainError("ExponentTriple: need p < rho < infinity");
}

double ExponentTriple::p_conjugate() const {
    return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
}

bool ExponentTriple::in_sphere_range() const {
    return p < 2.0 * d / (d + 1.0) && same_exponent(q, (d - 1.0) * p_conjugate() / (d + 1.0));
}

bool ExponentTriple::in_cone_range() const {
    return d >= 3 && p < 2.0 * (d - 1.0) / d && same_exponent(q, (d - 2.0) * p_conjugate() / d);
}

bool ExponentTriple::in_tomas_stein() const {
    return d >= 3 && p <= 2.0 * (d + 1.0) / (d + 3.0) && q == 2.0;
}

ScanReport scan_on(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                   const surfaces::SurfaceQuadrature& quad, const variation::ScaleGrid& grid,
                   const ExponentTriple& triple, double rel_tol) {
    if (quad.dimension != f.dimension() || mu.dimension() != f.dimension()) {
        throw ShapeError("scan_on: surface, measure and function dimensions differ");
    }
    ScanReport rep;
    rep.surface = quad.description;
    rep.measure = mu.name();
    rep.nodes = quad.nodes;
    rep.weights = quad.weights;
    rep.scales = grid.size();
    const std::size_t n = quad.size();
    rep.maximal.assign(n, 0.0);
    rep.variation.assign(n, 0.0);
    rep.single.assign(n, 0.0);

    const testfn::ScaledMeasureAverage unit(mu, 1.0);
    numerics::parallel_for(n, [&](std::size_t i) {
        std::vector<Complex> values(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            values[j] = testfn::average(f, testfn::ScaledMeasureAverage(mu, grid[j]), quad.nodes[i], rel_tol);
        }
        rep.maximal[i] = variation::maximal(values);
        rep.variation[i] = variation::rho_variation(values, triple.rho).value;
        rep.single[i] = std::abs(testfn::average(f, unit, quad.nodes[i], rel_tol));
    });

    auto aggregate = [&](const std::vector<double>& v) {
        std::vector<Complex> c(v.begin(), v.end());
        return surfaces::lq_norm(c, triple.q, quad);
    };
    rep.maximal_aggregate = aggregate(rep.maximal);
    rep.variation_aggregate = aggregate(rep.variation);
    rep.single_aggregate = aggregate(rep.single);
    rep.f_norm = testfn::lp_norm(f, triple.p);
    rep.maximal_ratio = rep.f_norm > 0.0 ? rep.maximal_aggregate / rep.f_norm : 0.0;
    rep.variation_ratio = rep.f_norm > 0.0 ? rep.variation_aggregate / rep.f_norm : 0.0;
    // max_t |a(t)| <= |a(1)| + sup_t |a(t) - a(1)| <= |a(1)| + V(a) pointwise, then Minkowski.
    rep.mechanism_holds =
        rep.maximal_aggregate <= (rep.single_aggregate + rep.variation_aggregate) * (1.0 + 1e-12) + 1e-300;
    return rep;
}

ScanReport maximal_variational_scan(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                    const surfaces::SurfaceSpec& surface, const ExponentTriple& triple,
                                    const ScanOptions& options) {
    if (options.k_min > 0 || options.k_max < 0) {
        throw DomainError("maximal_variational_scan: the scale grid must contain t = 1");
    }
    const auto quad = surfaces::quadrature(surface, options.resolution);
    const auto grid = variation::ScaleGrid::dyadic(options.k_min, options.k_max, options.points_per_octave);
    ScanReport rep = scan_on(f, mu, quad, grid, triple, options.rel_tol);
    if (!options.refine) return rep;

    const auto fine_quad = surfaces::quadrature(surface, 2 * options.resolution);
    const auto fine_grid = variation::ScaleGrid::dyadic(options.k_min, options.k_max, 2 * options.points_per_octave);
    const ScanReport fine = scan_on(f, mu, fine_quad, fine_grid, triple, options.rel_tol);
    rep.refined = true;
    rep.refined_maximal_ratio = fine.maximal_ratio;
    rep.refined_variation_ratio = fine.variation_ratio;
    rep.refinement_change = std::max(relative_change(rep.maximal_ratio, fine.maximal_ratio),
                                     relative_change(rep.variation_ratio, fine.variation_ratio));
    rep.stable = rep.refinement_change <= options.stability_tol;
    return rep;
}

DilationCheck dilation_covariance(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                  const surfaces::SurfaceQuadrature& quad, const variation::ScaleGrid& grid,
                                  const ExponentTriple& triple, double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) throw DomainError("dilation_covariance: lambda must be positive");
    DilationCheck out;
    out.lambda = lambda;
    out.base_ratio = scan_on(f, mu, quad, grid, triple).maximal_ratio;

    surfaces::SurfaceQuadrature scaled = quad;
    const double weight_factor = std::pow(lambda, quad.dimension - 1);
    for (auto& x : scaled.nodes) x *= lambda;
    for (auto& w : scaled.weights) w *= weight_factor;
    scaled.description = quad.description + " dilated";
    out.dilated_ratio = scan_on(f.dilated(lambda), mu, scaled, grid.scaled(lambda), triple).maximal_ratio;

    const int d = triple.d;
    const double inv_pc = 1.0 - 1.0 / triple.p;
    out.predicted_factor = std::pow(lambda, (d - 1.0) / triple.q - d * inv_pc);
    const double predicted = out.base_ratio * out.predicted_factor;
    out.rel_error = predicted > 0.0 ? std::fabs(out.dilated_ratio - predicted) / predicted : out.dilated_ratio;
    return out;
}

testfn::GaussianPacket knapp_packet(int d, double delta) {
    if (d < 2) throw DomainError("knapp_packet: need d >= 2");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("knapp_packet: delta must lie in (0, 1]");
    Eigen::VectorXd widths = Eigen::VectorXd::Constant(d, 1.0 / delta);
    widths[d - 1] = 1.0 / (delta * delta);
    Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
    pole[d - 1] = 1.0;
    // Amplitude delta^(d+1) = 1/det W keeps the transform's peak at 1.
    return testfn::GaussianPacket(Eigen::VectorXd::Zero(d), widths.asDiagonal(), pole, std::pow(delta, d + 1.0));
}

KnappReport knapp_scan(int d, double p, double q, const std::vector<double>& deltas, int resolution) {
    if (deltas.size() < 6) throw DomainError("knapp_scan: need at least six delta values");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] <= 0.25)) throw DomainError("knapp_scan: delta must lie in (0, 1/4]");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw DomainError("knapp_scan: deltas must decrease");
    }
    if (!(p > 1.0 && p <= 2.0)) throw DomainError("knapp_scan: p must lie in (1, 2]");
    if (!(q > 1.0) || std::isinf(q)) throw DomainError("knapp_scan: q must lie in (1, infinity)");

    KnappReport rep;
    rep.d = d;
    rep.p = p;
    rep.q = q;
    rep.deltas = deltas;
    const double inv_pc = 1.0 - 1.0 / p;
    rep.threshold = (d - 1.0) / ((d + 1.0) * inv_pc);
    rep.predicted_slope = (d - 1.0) / q - (d + 1.0) * inv_pc;
    rep.predicted_bounded = q <= rep.threshold * (1.0 + 1e-12);

    Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
    pole[d - 1] = 1.0;
    rep.ratios.assign(deltas.size(), 0.0);
    numerics::parallel_for(deltas.size(), [&](std::size_t i) {
        const auto packet = knapp_packet(d, deltas[i]);
        const auto cap = surfaces::cap_quadrature(d, pole, std::min(8.0 * deltas[i], M_PI), resolution);
        std::vector<Complex> values(cap.size());
        for (std::size_t j = 0; j < cap.size(); ++j) values[j] = packet.fourier(cap.nodes[j]);
        rep.ratios[i] = surfaces::lq_norm(values, q, cap) / testfn::lp_norm(packet, p);
    });

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        lx.push_back(std::log(deltas[i]));
        ly.push_back(std::log(rep.ratios[i]));
    }
    const auto fit = numerics::linear_fit(lx, ly);
    rep.slope = fit.slope;
    rep.residual = fit.residual;
    if (rep.residual > 0.05) throw FitError("knapp_scan: log-log residual above 0.05");
    rep.verdict = rep.slope >= -0.01 ? "bounded-consistent" : "unbounded-consistent";
    return rep;
}

SquareFunctionReport square_function_check(const testfn::TestFunction& f, const ck::AnnularBump& phi,
                                           const surfaces::SurfaceQuadrature& quad, double p, double q,
                                           const SquareFunctionOptions& options) {
    if (!(p >= 1.0 && p < q)) throw DomainError("square_function_check: need 1 <= p < q");
    if (quad.dimension != f.dimension()) throw ShapeError("square_function_check: dimension mismatch");
    const int d = f.dimension();
    SquareFunctionReport rep;
    rep.bound = std::pow(std::log(std::sqrt(2.0)), 1.0 / p);

    const double t_min = 1.0 / effective_radius(f);
    const int o_lo = static_cast<int>(std::floor(std::log2(t_min)));
    const int o_hi = static_cast<int>(std::ceil(std::log2(options.t_max)));
    if (o_hi - o_lo > 64) throw QuadratureError("square_function_check: t-range exceeds 64 octaves", 0.0);
    std::vector<double> t_nodes;
    std::vector<double> t_weights;  // weights for dt/t = d(ln t)
    const auto unit = numerics::gauss_legendre(options.t_per_octave, 0.0, std::log(2.0));
    for (int o = o_lo; o < o_hi; ++o) {
        for (int i = 0; i < options.t_per_octave; ++i) {
            t_nodes.push_back(std::exp2(static_cast<double>(o)) * std::exp(unit.nodes[i]));
            t_weights.push_back(unit.weights[i]);
        }
    }
    rep.t_nodes = t_nodes.size();

    // Unit-sphere directions for the shell rule, in dimension d.
    surfaces::SurfaceQuadrature dirs;
    if (d == 1) {
        dirs.nodes = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
        dirs.weights = {1.0, 1.0};
    } else {
        dirs = surfaces::quadrature(surfaces::Sphere{d}, options.shell_resolution);
    }

    const std::size_t n_nodes = quad.size();
    std::vector<std::vector<double>> transform_abs(t_nodes.size(), std::vector<double>(n_nodes, 0.0));
    std::vector<double> per_t_ratio(t_nodes.size(), 0.0);
    numerics::parallel_for(t_nodes.size(), [&](std::size_t it) {
        const double t = t_nodes[it];
        const auto radial = numerics::gauss_legendre(options.radial_nodes, 1.0 / t, std::sqrt(2.0) / t);
        std::vector<Eigen::VectorXd> xs;
        std::vector<Complex> gw;  // g(x) times the quadrature weight
        double g_norm_p = 0.0;
        for (int a = 0; a < options.radial_nodes; ++a) {
            const double rho = radial.nodes[a];
            const double bump = phi.radial(t * rho);
            if (bump == 0.0) continue;
            const double jac = radial.weights[a] * std::pow(rho, d - 1);
            for (std::size_t b = 0; b < dirs.size(); ++b) {
                Eigen::VectorXd x = rho * dirs.nodes[b];
                const Complex g = f(x) * bump;
                const double w = jac * dirs.weights[b];
                g_norm_p += w * std::pow(std::abs(g), p);
                gw.push_back(g * w);
                xs.push_back(std::move(x));
            }
        }
        std::vector<Complex> G(n_nodes, 0.0);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                const double phase = -2.0 * M_PI * xs[k].dot(quad.nodes[i]);
                sum += gw[k] * Complex(std::cos(phase), std::sin(phase));
            }
            G[i] = sum;
            transform_abs[it][i] = std::abs(sum);
        }
        const double g_norm = std::pow(g_norm_p, 1.0 / p);
        if (g_norm > 0.0) per_t_ratio[it] = surfaces::lq_norm(G, q, quad) / g_norm;
    });

    std::vector<Complex> square(n_nodes, 0.0);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        double s = 0.0;
        for (std::size_t it = 0; it < t_nodes.size(); ++it) s += t_weights[it] * std::pow(transform_abs[it][i], p);
        square[i] = std::pow(s, 1.0 / p);
    }
    rep.lhs = surfaces::lq_norm(square, q, quad);
    rep.c_restr_empirical = *std::max_element(per_t_ratio.begin(), per_t_ratio.end());
    rep.rhs = rep.c_restr_empirical * phi.sup_norm() * testfn::lp_norm(f, p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.pass = rep.ratio <= rep.bound * 1.02;
    return rep;
}

double scalar_square_step(const ck::AnnularBump& phi, double p, std::uint64_t seed, int count) {
    numerics::Rng rng(seed);
    const double denom = std::pow(phi.sup_norm(), p) * std::log(std::sqrt(2.0));
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double r = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const double v = numerics::integrate([&](double t) { return std::pow(phi.radial(t * r), p) / t; }, 1.0 / r,
                                             std::sqrt(2.0) / r, 0.0, 1e-12);
        worst = std::max(worst, v / denom);
    }
    return worst;
}

LebesgueReport lebesgue_point_experiment(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                         const Eigen::VectorXd& omega, const std::vector<double>& eps_grid,
                                         double rel_tol) {
    if (eps_grid.empty()) throw DomainError("lebesgue_point_experiment: empty eps grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 1.0)) throw DomainError("lebesgue_point_experiment: eps must lie in (0, 1]");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw DomainError("lebesgue_point_experiment: eps must decrease");
    }
    LebesgueReport rep;
    rep.eps = eps_grid;
    rep.errors.assign(eps_grid.size(), 0.0);
    const double mass = mu.total_mass();
    const Complex target = testfn::ft_exact(f, omega);
    numerics::parallel_for(eps_grid.size(), [&](std::size_t i) {
        const Complex avg = testfn::average(f, testfn::ScaledMeasureAverage(mu, eps_grid[i]), omega, rel_tol);
        rep.errors[i] = std::abs(avg / mass - target);
    });
    rep.exact = std::all_of(rep.errors.begin(), rep.errors.end(), [](double e) { return e == 0.0; });
    for (std::size_t i = 1; i < rep.errors.size(); ++i) rep.monotone = rep.monotone && rep.errors[i] <= rep.errors[i - 1];
    if (rep.exact) {
        rep.slope = std::numeric_limits<double>::infinity();
        return rep;
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < rep.errors.size(); ++i) {
        if (rep.errors[i] > 0.0) {
            lx.push_back(std::log(eps_grid[i]));
            ly.push_back(std::log(rep.errors[i]));
        }
    }
    const auto fit = numerics::linear_fit(lx, ly);
    rep.slope = fit.slope;
    rep.residual = fit.residual;
    return rep;
}

testfn::GaussianPacket autocorrelation(const testfn::GaussianPacket& f) {
    const int d = f.dimension();
    const double a = std::norm(f.amplitude()) * f.width_determinant() / std::pow(2.0, d / 2.0);
    return testfn::GaussianPacket(Eigen::VectorXd::Zero(d), std::sqrt(2.0) * f.width(), f.modulation(), a);
}

SquaredTrickReport squared_average_trick(const testfn::TestFunction& f, const measures::AveragingMeasure& mu,
                                         const surfaces::SurfaceSpec& surface, const ExponentTriple& triple,
                                         const ScanOptions& options, std::uint64_t seed) {
    if (!f.is_single()) throw DomainError("squared_average_trick: f must be a single Gaussian packet");
    const auto& g = f.packets().front();
    SquaredTrickReport rep(autocorrelation(g));
    const int d = g.dimension();

    numerics::Rng rng(seed);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.width());
    const double spread = 2.0 / eig.eigenvalues().minCoeff();
    const double peak = std::norm(g.amplitude() * g.width_determinant());
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd xi = g.modulation();
        for (int k = 0; k < d; ++k) xi[k] += spread * rng.normal();
        const double err = std::abs(rep.h.fourier(xi) - std::norm(g.fourier(xi)));
        rep.transform_error = std::max(rep.transform_error, err / std::max(peak, 1e-300));
    }

    rep.p_tilde = triple.p_tilde();
    rep.q_tilde = triple.q_tilde();
    rep.h_norm = testfn::lp_norm(rep.h, triple.p);
    rep.young_bound = std::pow(testfn::lp_norm(f, rep.p_tilde), 2.0);
    rep.young_holds = rep.h_norm <= rep.young_bound * (1.0 + 1e-12);
    rep.scan = maximal_variational_scan(rep.h, mu, surface, triple, options);
    rep.certificate = std::sqrt(rep.scan.maximal_aggregate) / testfn::lp_norm(f, rep.p_tilde);
    return rep;
}

}  // namespace restrictlab::experiments
