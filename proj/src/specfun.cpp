#include "restrictlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "restrictlab/errors.hpp"

namespace restrictlab::specfun {

namespace {

using Real = long double;

constexpr Real kPi = 3.141592653589793238462643383279502884L;
constexpr Real kEps = std::numeric_limits<Real>::epsilon();

// Requested accuracy relative to the local envelope of J_alpha.
constexpr double kTargetRelative = 1e-9;

void check_arguments(double alpha, double z) {
    if (!(alpha >= 0.0 && alpha <= kMaxBesselOrder)) {
        throw DomainError("bessel_j: order " + std::to_string(alpha) + " outside [0, 10]");
    }
    if (!(z >= 0.0) || std::isinf(z)) {
        throw DomainError("bessel_j: argument must be finite and nonnegative");
    }
}

// Magnitude scale of J_alpha near z: the large-argument envelope, capped at 1.
Real envelope(Real z) {
    if (z <= 1.0L) return 1.0L;
    return std::min<Real>(1.0L, std::sqrt(2.0L / (kPi * z)));
}

// Power series for J_alpha(z) / (z/2)^alpha.
Real series_scaled(Real alpha, Real z, const BesselEvalPolicy& policy) {
    const Real w = -(z * z) / 4.0L;
    Real term = 1.0L / std::tgamma(alpha + 1.0L);
    Real sum = term;
    Real abs_sum = std::fabs(term);
    bool converged = (z == 0.0L);
    for (int k = 1; k <= policy.series_terms && !converged; ++k) {
        term *= w / (static_cast<Real>(k) * (alpha + static_cast<Real>(k)));
        sum += term;
        abs_sum += std::fabs(term);
        if (static_cast<Real>(k) > z / 2.0L && std::fabs(term) <= kEps * abs_sum) converged = true;
    }
    if (!converged) {
        throw AccuracyError("bessel_j: power series did not converge within series_terms",
                            static_cast<double>(std::fabs(term) / abs_sum));
    }
    // Rounding error grows with the cancellation ratio abs_sum / |sum|.
    const Real rounding = kEps * abs_sum;
    const Real scale = z > 0.0L ? std::pow(z / 2.0L, alpha) : 1.0L;
    const Real floor = 1e-2L * envelope(z) / scale;
    if (rounding > kTargetRelative * std::max(std::fabs(sum), floor)) {
        throw AccuracyError("bessel_j: series cancellation exceeds tolerance; lower switchover_argument",
                            static_cast<double>(rounding / std::max(std::fabs(sum), floor)));
    }
    return sum;
}

// Hankel expansion J = sqrt(2/(pi z)) (P cos chi - Q sin chi).
Real hankel(Real alpha, Real z, const BesselEvalPolicy& policy) {
    const Real mu = 4.0L * alpha * alpha;
    Real p = 1.0L;
    Real q = 0.0L;
    Real a = 1.0L;
    Real last = 1.0L;
    bool converged = false;
    for (int k = 1; k <= policy.asymptotic_terms; ++k) {
        const Real odd = static_cast<Real>(2 * k - 1);
        const Real next = a * (mu - odd * odd) / (static_cast<Real>(k) * 8.0L * z);
        if (odd * odd > mu && std::fabs(next) > std::fabs(a)) break;  // divergent tail
        a = next;
        last = std::fabs(a);
        if (k % 2 == 1) {
            q += ((k - 1) / 2) % 2 == 0 ? a : -a;
        } else {
            p += (k / 2) % 2 == 0 ? a : -a;
        }
        if (last <= kEps) {
            converged = true;
            break;
        }
    }
    if (!converged && last > 0.1L * kTargetRelative) {
        throw AccuracyError("bessel_j: asymptotic expansion cannot reach tolerance; raise switchover_argument",
                            static_cast<double>(last));
    }
    const Real chi = z - (alpha / 2.0L + 0.25L) * kPi;
    return std::sqrt(2.0L / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

void BesselEvalPolicy::validate() const {
    if (series_terms < 20) throw DomainError("BesselEvalPolicy: series_terms must be >= 20");
    if (asymptotic_terms < 4) throw DomainError("BesselEvalPolicy: asymptotic_terms must be >= 4");
    if (!(switchover_argument >= 10.0)) {
        throw DomainError("BesselEvalPolicy: switchover_argument must be >= 10");
    }
}

double gamma(double x) {
    if (!(x > 0.0) || std::isinf(x)) throw DomainError("gamma: argument must be positive and finite");
    return std::tgamma(x);
}

double bessel_j(double alpha, double z, const BesselEvalPolicy& policy) {
    check_arguments(alpha, z);
    policy.validate();
    if (z == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    const Real a = alpha;
    const Real x = z;
    if (z < policy.switchover_argument) {
        return static_cast<double>(series_scaled(a, x, policy) * std::pow(x / 2.0L, a));
    }
    return static_cast<double>(hankel(a, x, policy));
}

double bessel_j_scaled(double alpha, double z, const BesselEvalPolicy& policy) {
    check_arguments(alpha, z);
    policy.validate();
    const Real a = alpha;
    const Real x = z;
    if (z < policy.switchover_argument) return static_cast<double>(series_scaled(a, x, policy));
    return static_cast<double>(hankel(a, x, policy) / std::pow(x / 2.0L, a));
}

}  // namespace restrictlab::specfun
