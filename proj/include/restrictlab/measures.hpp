#pragma once

#include <string>

#include <Eigen/Dense>

namespace restrictlab::measures {

enum class MeasureKind { GaussianDensity, UnitBallIndicator, SphereSurface, ZeroGradient };

/// A radial averaging measure with closed-form Fourier transform.
///
/// `dilation` s replaces the transform by x -> mu_hat(s x); it is 1 for the
/// four base measures. The Gaussian density is exp(-pi |x|^2) (self-dual), the
/// ball is the indicator of the unit ball, the sphere carries its surface
/// measure and ZeroGradient is the unit point mass at the origin.
class AveragingMeasure {
public:
    static AveragingMeasure gaussian(int d);
    static AveragingMeasure unit_ball(int d);    // d >= 2
    static AveragingMeasure unit_sphere(int d);  // d >= 4
    static AveragingMeasure point_mass(int d);

    MeasureKind kind() const { return kind_; }
    int dimension() const { return dim_; }
    double dilation() const { return dilation_; }
    AveragingMeasure dilated(double s) const;

    /// mu(R^d) = mu_hat(0).
    double total_mass() const;
    std::string name() const;

private:
    AveragingMeasure(MeasureKind kind, int dim) : kind_(kind), dim_(dim) {}

    MeasureKind kind_;
    int dim_;
    double dilation_ = 1.0;
};

/// Parses "gaussian", "ball", "sphere" or "point".
AveragingMeasure measure_from_name(const std::string& name, int d);

/// mu_hat as a function of |x|.
double mu_hat_radial(const AveragingMeasure& mu, double r);
double mu_hat(const AveragingMeasure& mu, const Eigen::VectorXd& x);

/// d/dr of mu_hat_radial; defined for all r >= 0.
double mu_hat_radial_derivative(const AveragingMeasure& mu, double r);

/// Closed-form gradient. Throws DomainError at x = 0.
Eigen::VectorXd grad_mu_hat(const AveragingMeasure& mu, const Eigen::VectorXd& x);

/// A pair (D, eta) for which |grad mu_hat(x)| <= D (1 + |x|)^(-1-eta) holds on all of R^d.
struct DecayConstants {
    double D = 0.0;
    double eta = 1.0;
};

/// Documented decay constants. eta is (d-1)/2 for the ball, (d-3)/2 for the
/// sphere and 1 for the Gaussian and the point mass; D is a certified upper
/// bound obtained from a dense scan on [0, 200] with a 5% margin (beyond 200
/// the Bessel envelope is monotone).
DecayConstants documented_decay(const AveragingMeasure& mu);

struct DecayProfile {
    double D_est = 0.0;
    double eta_est = 0.0;  // +infinity when the gradient vanishes identically
    double fit_min = 0.0;
    double fit_max = 0.0;
    double residual = 0.0;
    int samples = 0;
};

/// Fits log sup|grad mu_hat| against log r over `samples` log-spaced radii in
/// [r_min, r_max]. For a radial measure the sup over a sphere is a single
/// oscillating value, so the sup is taken over the shell [r, r + 1/s] that
/// spans one oscillation period (s is the dilation). D_est is the least D that
/// makes the decay bound hold at every sampled radius with the documented eta.
DecayProfile decay_profile(const AveragingMeasure& mu, double r_min, double r_max, int samples);

}  // namespace restrictlab::measures
