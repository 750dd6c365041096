#pragma once

namespace restrictlab::specfun {

/// Controls how J_alpha is evaluated: power series below `switchover_argument`,
/// Hankel's large-argument expansion above it.
struct BesselEvalPolicy {
    int series_terms = 120;
    double switchover_argument = 18.0;
    int asymptotic_terms = 60;

    /// Throws DomainError unless series_terms >= 20, asymptotic_terms >= 4
    /// and switchover_argument >= 10.
    void validate() const;
};

inline constexpr double kMaxBesselOrder = 10.0;

/// Gamma function for x > 0. Throws DomainError otherwise.
double gamma(double x);

/// Bessel function of the first kind J_alpha(z) for alpha in [0, 10] and z >= 0.
///
/// Both branches run in extended precision. The series branch sums terms by
/// ratio recursion, so no factorial is ever formed. Throws AccuracyError when
/// the policy's term budget cannot reach a relative accuracy of about 1e-10.
double bessel_j(double alpha, double z, const BesselEvalPolicy& policy = {});

/// J_alpha(z) / (z/2)^alpha, the entire function behind the removable
/// singularities of the ball and sphere transforms. Equals 1/Gamma(alpha+1) at 0.
double bessel_j_scaled(double alpha, double z, const BesselEvalPolicy& policy = {});

}  // namespace restrictlab::specfun
