#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "restrictlab/measures.hpp"
#include "restrictlab/oracle.hpp"

namespace restrictlab::ck {

using Complex = std::complex<double>;

/// phi(x) = b(|x|) / m with b(r) = exp(-1 / ((r - 1)(sqrt2 - r)))^order on
/// (1, sqrt2), zero elsewhere, and m = int b(u) du/u, so that
/// int_0^inf phi(s x) ds/s = 1 for every x != 0.
class AnnularBump {
public:
    /// Throws DomainError for order < 2 and AccuracyError if the normalization
    /// identity misses 1 by more than 1e-10 at any of 20 seeded radii.
    explicit AnnularBump(int order = 2);

    int order() const { return order_; }
    double mellin_mass() const { return mass_; }
    /// Largest normalization error seen by the constructor's self-check.
    double normalization_error() const { return norm_err_; }
    double sup_norm() const { return sup_; }

    double radial(double r) const;
    double operator()(const Eigen::VectorXd& x) const { return radial(x.norm()); }
    /// The unnormalized profile b(r).
    double profile(double r) const;

private:
    int order_;
    double mass_ = 1.0;
    double norm_err_ = 0.0;
    double sup_ = 0.0;
};

AnnularBump make_annular_bump(int profile_order);

/// int_0^inf phi(s |x|) ds / s, by adaptive quadrature over the support.
double normalization_integral(const AnnularBump& phi, double r);

/// Which half-octave of [2^(k-1), 2^k] the t-integral of Psi_k runs over.
enum class HalfOctave { Lower, Upper };

/// Psi_k(x) = int psi_check(t x) dt/t over [2^(k-1), 2^(k-1/2)] (Lower) or
/// [2^(k-1/2), 2^k] (Upper). The generator has psi_check = psi_hat = phi.
struct PartitionFunctions {
    AnnularBump generator;
    HalfOctave half = HalfOctave::Lower;
    int M = 0;
    int N = 0;
};

/// Radii bounding supp Psi_k: [2^(-k+1/2), 2^(-k+3/2)] for Lower and
/// [2^(-k), 2^(-k+1)] for Upper.
std::pair<double, double> psi_k_support(const PartitionFunctions& pf, int k);

/// Psi_k(x) to absolute accuracy 1e-12 relative to sup phi; exactly 0 outside the support.
Complex psi_k(const PartitionFunctions& pf, int k, const Eigen::VectorXd& x);
double psi_k_radial(const PartitionFunctions& pf, int k, double r);

/// sup_x |Psi_k(x)| / sup|phi| measured on a radial grid; at most ln(2)/2.
double psi_k_sup_constant(const PartitionFunctions& pf, int samples = 2001);

struct CkConstants {
    double A = 0.0;
    double B = 0.0;
};

/// A = 1 / (1 - 2^(1/q - 1/p)), B = 4 / ((1 - 2^(1/q - 1/p))(1 - 2^(1/rho - 1/p))).
/// Throws DomainError unless 1 <= p <= 2, q > p and rho > p.
CkConstants ck_constants(double p, double q, double rho);

/// Smallest K with sum_(k<=K) m_k > (1/2) sum_k m_k. Throws ShapeError for an
/// empty list and DomainError for negative or non-finite masses or zero total.
std::size_t greedy_split(const std::vector<double>& masses);

/// Per node, the index of the first (or last) maximum of |partial sum|.
struct StoppingDecomposition {
    std::vector<std::size_t> stop;
    std::vector<std::vector<std::size_t>> sets;  // nodes per index
};

/// partial[n][i] is the n-th partial sum at node i.
StoppingDecomposition stopping_decomposition(const std::vector<std::vector<Complex>>& partial, bool first_maximum = true);

struct CkReport {
    std::uint64_t seed = 0;
    double p = 1.0;
    double q = 2.0;
    double rho = 0.0;  // 0 for the maximal check
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double c_restr = 0.0;
    double bound = 0.0;  // constant times c_restr
    bool empirical = false;
    bool pass = true;
};

nlohmann::json to_json(const CkReport& r);

/// Maximal lemma on the discrete model: lhs = ||max_n |sum_(k<=n) (f Psi_k)^| ||_(L^q(sigma)),
/// rhs = ||f||_p over the union of the blocks, bound = A_(p,q) C_restr.
/// For p = 1 the certified constant is used and a failure throws
/// VerificationError carrying the instance. For p > 1 C_restr is replaced by
/// the largest ratio over contiguous block ranges and the report is marked
/// empirical; it is never asserted.
CkReport ck_max_verify(const oracle::RestrictionInstance& inst, bool first_maximum = true);

/// Variational lemma: partial sums P_0 = 0, P_n = sum_(k<n) (f Psi_k)^ over
/// n = 0..blocks, lhs = ||V^rho(P)||_(L^q(sigma)), bound = B_(p,q,rho) C_restr.
CkReport ck_var_verify(const oracle::RestrictionInstance& inst, double rho);

/// max over contiguous block ranges of ||(f 1_range)^||_q / ||f 1_range||_p.
double empirical_c_restr(const oracle::RestrictionInstance& inst);

/// psi_hat^(s)(x) = phi(x) (x/s) . grad mu_hat(x/s), a radial function.
class MollifierFamily {
public:
    MollifierFamily(measures::AveragingMeasure mu, AnnularBump phi);

    const measures::AveragingMeasure& measure() const { return mu_; }
    const AnnularBump& bump() const { return phi_; }

    double radial(double s, double r) const;
    double operator()(double s, const Eigen::VectorXd& x) const { return radial(s, x.norm()); }
    /// C in ||psi_hat^(s)||_inf <= C D min(s^eta, 1/s): sqrt2 sup phi, since
    /// |x| <= sqrt2 on the support and (u)(1 + u)^(-1-eta) <= min(u^(-eta), u).
    double envelope_constant() const { return std::sqrt(2.0) * phi_.sup_norm(); }

private:
    measures::AveragingMeasure mu_;
    AnnularBump phi_;
};

struct DecayRow {
    double s = 0.0;
    double sup = 0.0;
    double envelope = 0.0;  // D min(s^eta, 1/s)
    double ratio = 0.0;     // sup / envelope, 0 when both vanish
};

/// Sup of |psi_hat^(s)| over 1000 radii in the annulus for each s.
std::vector<DecayRow> psi_s_decay(const MollifierFamily& mf, const std::vector<double>& s_grid);

struct DecompositionCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
};

/// lhs = mu_check(b x) - mu_check(a x); rhs = int ds/s int_(sa)^(sb) psi_check^(s)(t x) dt/t.
/// The s-integrand vanishes outside [1/(b|x|), sqrt2/(a|x|)], so no tail
/// truncation is needed. Throws VerificationError when
/// |lhs - rhs| > 1e-3 (1 + |lhs|) and QuadratureError on budget exhaustion.
DecompositionCheck decomposition_check(const MollifierFamily& mf, double a, double b, const Eigen::VectorXd& x);

}  // namespace restrictlab::ck
