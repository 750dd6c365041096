#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace restrictlab::surfaces {

struct Sphere {
    int d;
};

/// Points (eta, |eta|^2 / 2), |eta| <= radius, with d sigma = d eta.
struct ParaboloidPatch {
    int d;
    double radius;
};

/// Points (eta, |eta|), inner <= |eta| <= outer, with d sigma = d eta / |xi|.
struct ConePatch {
    int d;
    double inner;
    double outer;
};

struct Atom {
    Eigen::VectorXd point;
    double weight;
};

struct FiniteAtomic {
    std::vector<Atom> atoms;
};

using SurfaceSpec = std::variant<Sphere, ParaboloidPatch, ConePatch, FiniteAtomic>;

/// Nodes and positive weights approximating (S, sigma).
struct SurfaceQuadrature {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
    int dimension = 0;
    std::string description;

    std::size_t size() const { return nodes.size(); }
    double total_weight() const;
};

/// Builds the quadrature for `spec`.
///
/// Sphere: Gauss-Jacobi in the cosine of each polar angle (the sin^k Jacobian
/// is the Jacobi weight, so polynomials of degree < 2 * resolution integrate
/// exactly) and 2 * resolution uniform azimuthal nodes. Patches: polar
/// coordinates on the eta-domain, Gauss-Legendre in |eta| times the sphere rule
/// in one dimension lower. Atoms pass through. Throws DomainError for spheres
/// with d > 6 or invalid patch parameters.
SurfaceQuadrature quadrature(const SurfaceSpec& spec, int resolution);

/// Geodesic cap of S^(d-1) around `pole` with angular radius `angle`; polar
/// angle in [0, angle] by Gauss-Legendre, `resolution` nodes per angle.
SurfaceQuadrature cap_quadrature(int d, const Eigen::VectorXd& pole, double angle, int resolution);

/// (sum_i w_i |v_i|^q)^(1/q). Throws ShapeError on length mismatch and
/// DomainError unless q is in (1, infinity).
double lq_norm(const std::vector<std::complex<double>>& values, double q, const SurfaceQuadrature& quad);

/// Surface area 2 pi^(d/2) / Gamma(d/2) of S^(d-1).
double sphere_area(int d);

/// CSV with one row per node: x0,...,x{d-1},weight.
void write_csv(std::ostream& os, const SurfaceQuadrature& quad);

}  // namespace restrictlab::surfaces
