#include "restrictlab/surfaces.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/specfun.hpp"

namespace restrictlab::surfaces {

namespace {

constexpr int kMaxSphereDimension = 6;

struct Rule {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
};

// Gauss-Jacobi rule for the weight (1 - u^2)^a on [-1, 1], a > -1/2, by
// Golub-Welsch on the symmetric Jacobi matrix. Exact to degree 2n - 1.
numerics::QuadratureRule gauss_gegenbauer(int n, double a) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + 2.0 * a;
        const double beta = k * (k + 2.0 * a) / ((s + 1.0) * (s - 1.0));
        J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    const double mu0 = std::sqrt(M_PI) * specfun::gamma(a + 1.0) / specfun::gamma(a + 1.5);
    numerics::QuadratureRule rule;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(eig.eigenvalues()[i]);
        const double v = eig.eigenvectors()(0, i);
        rule.weights.push_back(mu0 * v * v);
    }
    return rule;
}

// Quadrature on the unit sphere S^(m-1) in R^m, polar angle restricted to [0, max_angle].
Rule sphere_rule(int m, int n, double max_angle) {
    Rule out;
    if (m == 1) {
        out.nodes = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
        out.weights = {1.0, 1.0};
        return out;
    }
    if (m == 2 && max_angle >= M_PI) {
        const int count = 2 * n;
        for (int j = 0; j < count; ++j) {
            const double phi = 2.0 * M_PI * j / count;
            Eigen::VectorXd p(2);
            p << std::cos(phi), std::sin(phi);
            out.nodes.push_back(p);
            out.weights.push_back(2.0 * M_PI / count);
        }
        return out;
    }
    // Full range: u = cos(theta) carries the Jacobian sin^(m-2) as the weight
    // (1 - u^2)^((m-3)/2), so polynomials in the coordinates integrate exactly.
    // Caps keep Gauss-Legendre in theta itself.
    const bool full = max_angle >= M_PI;
    const auto polar = full ? gauss_gegenbauer(n, 0.5 * (m - 3)) : numerics::gauss_legendre(n, 0.0, max_angle);
    const Rule inner = sphere_rule(m - 1, n, M_PI);
    for (int i = 0; i < n; ++i) {
        const double c = full ? polar.nodes[i] : std::cos(polar.nodes[i]);
        const double sn = full ? std::sqrt(std::max(0.0, 1.0 - c * c)) : std::sin(polar.nodes[i]);
        const double jac = full ? 1.0 : std::pow(sn, m - 2);
        for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
            Eigen::VectorXd p(m);
            p[0] = c;
            p.tail(m - 1) = sn * inner.nodes[j];
            out.nodes.push_back(std::move(p));
            out.weights.push_back(polar.weights[i] * jac * inner.weights[j]);
        }
    }
    return out;
}

// Graph patches in polar coordinates on the eta-domain.
template <class Height, class Metric>
SurfaceQuadrature graph_patch(int d, double r0, double r1, int n, Height height, Metric metric) {
    SurfaceQuadrature quad;
    quad.dimension = d;
    const auto radial = numerics::gauss_legendre(n, r0, r1);
    const Rule dirs = sphere_rule(d - 1, n, M_PI);
    for (int i = 0; i < n; ++i) {
        const double rho = radial.nodes[i];
        const double jac = std::pow(rho, d - 2) * metric(rho);
        for (std::size_t j = 0; j < dirs.nodes.size(); ++j) {
            Eigen::VectorXd p(d);
            p.head(d - 1) = rho * dirs.nodes[j];
            p[d - 1] = height(rho);
            quad.nodes.push_back(std::move(p));
            quad.weights.push_back(radial.weights[i] * jac * dirs.weights[j]);
        }
    }
    return quad;
}

// Orthogonal map sending e_0 to the unit vector `pole` (Householder reflection).
Eigen::MatrixXd pole_map(const Eigen::VectorXd& pole) {
    const int d = static_cast<int>(pole.size());
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(d);
    e0[0] = 1.0;
    const Eigen::VectorXd v = e0 - pole;
    if (v.norm() < 1e-15) return Eigen::MatrixXd::Identity(d, d);
    return Eigen::MatrixXd::Identity(d, d) - 2.0 * v * v.transpose() / v.squaredNorm();
}

}  // namespace

double SurfaceQuadrature::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

double sphere_area(int d) { return 2.0 * std::pow(M_PI, d / 2.0) / specfun::gamma(d / 2.0); }

SurfaceQuadrature quadrature(const SurfaceSpec& spec, int resolution) {
    if (resolution < 2) throw DomainError("quadrature: resolution must be >= 2");
    return std::visit(
        [resolution](const auto& s) -> SurfaceQuadrature {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Sphere>) {
                if (s.d < 2) throw DomainError("quadrature: sphere needs d >= 2");
                if (s.d > kMaxSphereDimension) throw DomainError("quadrature: sphere dimension above 6 not supported");
                Rule r = sphere_rule(s.d, resolution, M_PI);
                SurfaceQuadrature q;
                q.dimension = s.d;
                q.nodes = std::move(r.nodes);
                q.weights = std::move(r.weights);
                q.description = "sphere d=" + std::to_string(s.d) + " resolution=" + std::to_string(resolution);
                return q;
            } else if constexpr (std::is_same_v<T, ParaboloidPatch>) {
                if (s.d < 2 || s.d > kMaxSphereDimension + 1) throw DomainError("quadrature: paraboloid dimension");
                if (!(s.radius > 0.0)) throw DomainError("quadrature: paraboloid radius must be positive");
                auto q = graph_patch(
                    s.d, 0.0, s.radius, resolution, [](double rho) { return 0.5 * rho * rho; },
                    [](double) { return 1.0; });
                q.description = "paraboloid d=" + std::to_string(s.d) + " radius=" + std::to_string(s.radius);
                return q;
            } else if constexpr (std::is_same_v<T, ConePatch>) {
                if (s.d < 2 || s.d > kMaxSphereDimension + 1) throw DomainError("quadrature: cone dimension");
                if (!(s.inner > 0.0 && s.outer > s.inner)) throw DomainError("quadrature: cone needs 0 < inner < outer");
                auto q = graph_patch(
                    s.d, s.inner, s.outer, resolution, [](double rho) { return rho; },
                    [](double rho) { return 1.0 / (std::sqrt(2.0) * rho); });
                q.description = "cone d=" + std::to_string(s.d);
                return q;
            } else {
                if (s.atoms.empty()) throw DomainError("quadrature: atomic surface needs at least one atom");
                SurfaceQuadrature q;
                q.dimension = static_cast<int>(s.atoms.front().point.size());
                for (const auto& a : s.atoms) {
                    if (!(a.weight > 0.0) || std::isinf(a.weight)) throw DomainError("quadrature: atom weights must be positive");
                    if (a.point.size() != q.dimension) throw ShapeError("quadrature: atoms must share a dimension");
                    q.nodes.push_back(a.point);
                    q.weights.push_back(a.weight);
                }
                q.description = "atomic n=" + std::to_string(s.atoms.size());
                return q;
            }
        },
        spec);
}

SurfaceQuadrature cap_quadrature(int d, const Eigen::VectorXd& pole, double angle, int resolution) {
    if (d < 2 || d > kMaxSphereDimension) throw DomainError("cap_quadrature: unsupported dimension");
    if (pole.size() != d) throw ShapeError("cap_quadrature: pole has wrong dimension");
    if (!(angle > 0.0)) throw DomainError("cap_quadrature: angle must be positive");
    if (resolution < 2) throw DomainError("cap_quadrature: resolution must be >= 2");
    // Below the full circle the d = 2 case goes through the polar branch with S^0 directions.
    Rule r = sphere_rule(d, resolution, std::min(angle, M_PI - 1e-15));
    if (d == 2 && angle >= M_PI) r = sphere_rule(2, resolution, M_PI);
    const Eigen::MatrixXd rot = pole_map(pole.normalized());
    SurfaceQuadrature q;
    q.dimension = d;
    for (auto& p : r.nodes) q.nodes.push_back(rot * p);
    q.weights = std::move(r.weights);
    q.description = "cap d=" + std::to_string(d) + " angle=" + std::to_string(angle);
    return q;
}

double lq_norm(const std::vector<std::complex<double>>& values, double q, const SurfaceQuadrature& quad) {
    if (values.size() != quad.size()) throw ShapeError("lq_norm: values not aligned with nodes");
    if (!(q > 1.0) || std::isinf(q)) throw DomainError("lq_norm: q must lie in (1, infinity)");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += quad.weights[i] * std::pow(std::abs(values[i]), q);
    return std::pow(sum, 1.0 / q);
}

void write_csv(std::ostream& os, const SurfaceQuadrature& quad) {
    char buf[64];
    for (int k = 0; k < quad.dimension; ++k) os << 'x' << k << ',';
    os << "weight\n";
    for (std::size_t i = 0; i < quad.size(); ++i) {
        for (int k = 0; k < quad.dimension; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,", quad.nodes[i][k]);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g\n", quad.weights[i]);
        os << buf;
    }
}

}  // namespace restrictlab::surfaces
