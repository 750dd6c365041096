#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "restrictlab/surfaces.hpp"

namespace restrictlab::oracle {

using Complex = std::complex<double>;

/// Finite point set with counting measure on the spatial side, atoms on the
/// frequency side. Every quantity of the restriction inequality is a finite sum.
struct DiscreteRestrictionModel {
    /// Throws ShapeError for mixed dimensions or an empty side, DomainError for bad exponents.
    DiscreteRestrictionModel(std::vector<Eigen::VectorXd> lattice, surfaces::FiniteAtomic atoms, double p, double q);

    std::vector<Eigen::VectorXd> lattice;
    surfaces::FiniteAtomic atoms;
    double p;
    double q;

    int dimension() const { return static_cast<int>(lattice.front().size()); }
    surfaces::SurfaceQuadrature atom_quadrature() const;
};

/// g_hat(xi_i) = sum_j g_j exp(-2 pi i x_j . xi_i). Throws ShapeError on length mismatch.
std::vector<Complex> dft_restriction(const std::vector<Complex>& g, const DiscreteRestrictionModel& model);

/// (sum_i w_i)^(1/q), valid as the restriction constant because
/// ||g_hat||_(L^q(sigma)) <= sigma(S)^(1/q) ||g_hat||_inf <= sigma(S)^(1/q) ||g||_1.
/// Throws DomainError unless p = 1.
double exact_c_restr(const DiscreteRestrictionModel& model);

/// (sum_j |g_j|^p)^(1/p) under counting measure.
double lp_counting(const std::vector<Complex>& g, double p);

struct InstanceParams {
    int d = 2;
    int max_lattice = 4096;
    int max_blocks = 16;
    int max_atoms = 32;
    double p = 1.0;
    double q = 2.0;
};

/// A model, a function on its lattice and a partition of the lattice into
/// blocks standing in for disjointly supported Psi_k.
struct RestrictionInstance {
    std::uint64_t seed = 0;
    DiscreteRestrictionModel model;
    std::vector<Complex> f;
    std::vector<int> block_of;  // block index per lattice point
    int blocks = 0;

    /// f restricted to block k (zero elsewhere).
    std::vector<Complex> block_function(int k) const;
    /// sum_(j in block k) |f_j|^p.
    double block_mass(int k) const;
};

/// Deterministic instance from `seed`. Lattice size, block count and atom
/// count are drawn up to the caps; every block is nonempty and |f_j| <= 1.
/// Throws DomainError when caps exceed 16 blocks or 4096 lattice points.
RestrictionInstance random_instance(std::uint64_t seed, const InstanceParams& params = {});

nlohmann::json to_json(const RestrictionInstance& instance);
RestrictionInstance instance_from_json(const nlohmann::json& j);

}  // namespace restrictlab::oracle
