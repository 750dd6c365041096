#include "restrictlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/specfun.hpp"

namespace restrictlab::measures {

namespace {

constexpr int kMaxDimension = 16;

// Below this Bessel argument the gradient uses the entire-function form
// -2 pi^(a+2) G_(a+1)(2 pi r) r, which has no cancellation near the origin.
constexpr double kSmallArgument = 5.0;

void check_dimension(int d, int min_d, const char* what) {
    if (d < min_d || d > kMaxDimension) {
        throw DomainError(std::string(what) + ": unsupported dimension " + std::to_string(d));
    }
}

// Bessel order and prefactor c of mu_hat = c * J_a(2 pi r) / r^a.
struct BesselForm {
    double order;
    double prefactor;
};

BesselForm bessel_form(const AveragingMeasure& mu) {
    const double d = mu.dimension();
    if (mu.kind() == MeasureKind::UnitBallIndicator) return {d / 2.0, 1.0};
    return {d / 2.0 - 1.0, 2.0 * M_PI};
}

// c * J_a(2 pi r) / r^a evaluated without the removable singularity.
double bessel_ratio(const BesselForm& form, double r) {
    const double z = 2.0 * M_PI * r;
    return form.prefactor * std::pow(M_PI, form.order) * specfun::bessel_j_scaled(form.order, z);
}

double bessel_ratio_derivative(const BesselForm& form, double r) {
    const double a = form.order;
    const double z = 2.0 * M_PI * r;
    if (z < kSmallArgument) {
        return -form.prefactor * 2.0 * std::pow(M_PI, a + 2.0) * specfun::bessel_j_scaled(a + 1.0, z) * r;
    }
    // (pi J_(a-1) - pi J_(a+1) - a J_a / r) / r^a
    const double jm = specfun::bessel_j(a - 1.0, z);
    const double jp = specfun::bessel_j(a + 1.0, z);
    const double j0 = specfun::bessel_j(a, z);
    return form.prefactor * (M_PI * jm - M_PI * jp - a * j0 / r) / std::pow(r, a);
}

}  // namespace

AveragingMeasure AveragingMeasure::gaussian(int d) {
    check_dimension(d, 1, "gaussian");
    return {MeasureKind::GaussianDensity, d};
}

AveragingMeasure AveragingMeasure::unit_ball(int d) {
    check_dimension(d, 2, "unit_ball");
    return {MeasureKind::UnitBallIndicator, d};
}

AveragingMeasure AveragingMeasure::unit_sphere(int d) {
    check_dimension(d, 4, "unit_sphere");
    return {MeasureKind::SphereSurface, d};
}

AveragingMeasure AveragingMeasure::point_mass(int d) {
    check_dimension(d, 1, "point_mass");
    return {MeasureKind::ZeroGradient, d};
}

AveragingMeasure AveragingMeasure::dilated(double s) const {
    if (!(s > 0.0) || std::isinf(s)) throw DomainError("dilated: factor must be positive");
    AveragingMeasure out = *this;
    out.dilation_ = dilation_ * s;
    return out;
}

double AveragingMeasure::total_mass() const { return mu_hat_radial(*this, 0.0); }

std::string AveragingMeasure::name() const {
    switch (kind_) {
        case MeasureKind::GaussianDensity: return "gaussian";
        case MeasureKind::UnitBallIndicator: return "ball";
        case MeasureKind::SphereSurface: return "sphere";
        case MeasureKind::ZeroGradient: return "point";
    }
    return "unknown";
}

AveragingMeasure measure_from_name(const std::string& name, int d) {
    if (name == "gaussian") return AveragingMeasure::gaussian(d);
    if (name == "ball") return AveragingMeasure::unit_ball(d);
    if (name == "sphere") return AveragingMeasure::unit_sphere(d);
    if (name == "point") return AveragingMeasure::point_mass(d);
    throw DomainError("unknown measure '" + name + "'");
}

double mu_hat_radial(const AveragingMeasure& mu, double r) {
    const double s = mu.dilation() * r;
    switch (mu.kind()) {
        case MeasureKind::GaussianDensity: return std::exp(-M_PI * s * s);
        case MeasureKind::ZeroGradient: return 1.0;
        case MeasureKind::UnitBallIndicator:
        case MeasureKind::SphereSurface: return bessel_ratio(bessel_form(mu), s);
    }
    return 0.0;
}

double mu_hat(const AveragingMeasure& mu, const Eigen::VectorXd& x) {
    if (x.size() != mu.dimension()) throw ShapeError("mu_hat: point has wrong dimension");
    return mu_hat_radial(mu, x.norm());
}

double mu_hat_radial_derivative(const AveragingMeasure& mu, double r) {
    const double scale = mu.dilation();
    const double s = scale * r;
    switch (mu.kind()) {
        case MeasureKind::GaussianDensity: return scale * (-2.0 * M_PI * s * std::exp(-M_PI * s * s));
        case MeasureKind::ZeroGradient: return 0.0;
        case MeasureKind::UnitBallIndicator:
        case MeasureKind::SphereSurface: return scale * bessel_ratio_derivative(bessel_form(mu), s);
    }
    return 0.0;
}

Eigen::VectorXd grad_mu_hat(const AveragingMeasure& mu, const Eigen::VectorXd& x) {
    if (x.size() != mu.dimension()) throw ShapeError("grad_mu_hat: point has wrong dimension");
    const double r = x.norm();
    if (r == 0.0) throw DomainError("grad_mu_hat: undefined at the origin");
    return (mu_hat_radial_derivative(mu, r) / r) * x;
}

DecayConstants documented_decay(const AveragingMeasure& mu) {
    DecayConstants base;
    switch (mu.kind()) {
        case MeasureKind::GaussianDensity: base.eta = 1.0; break;
        case MeasureKind::ZeroGradient: base.eta = 1.0; break;
        case MeasureKind::UnitBallIndicator: base.eta = (mu.dimension() - 1) / 2.0; break;
        case MeasureKind::SphereSurface: base.eta = (mu.dimension() - 3) / 2.0; break;
    }
    if (mu.kind() == MeasureKind::ZeroGradient) {
        base.D = 0.0;
        return base;
    }

    static std::mutex cache_mutex;
    static std::map<std::pair<int, int>, double> cache;
    const auto key = std::make_pair(static_cast<int>(mu.kind()), mu.dimension());
    double D = 0.0;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) D = it->second;
    }
    if (D == 0.0) {
        const AveragingMeasure unit = mu.dilated(1.0 / mu.dilation());
        const double step = 1e-3;
        const int n = static_cast<int>(200.0 / step);
        for (int i = 0; i <= n; ++i) {
            const double r = i * step;
            const double g = std::fabs(mu_hat_radial_derivative(unit, r)) * std::pow(1.0 + r, 1.0 + base.eta);
            D = std::max(D, g);
        }
        D *= 1.05;
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache[key] = D;
    }
    // |grad mu_hat_s(x)| = s |grad mu_hat(s x)| and (1 + s r) >= min(1, s)(1 + r).
    const double s = mu.dilation();
    base.D = D * s * std::pow(std::max(1.0, 1.0 / s), 1.0 + base.eta);
    return base;
}

DecayProfile decay_profile(const AveragingMeasure& mu, double r_min, double r_max, int samples) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("decay_profile: need 0 < r_min < r_max");
    if (samples < 50) throw DomainError("decay_profile: need at least 50 samples");
    DecayProfile out;
    out.fit_min = r_min;
    out.fit_max = r_max;
    out.samples = samples;
    const DecayConstants doc = documented_decay(mu);

    constexpr int kShellPoints = 64;
    const double period = 1.0 / mu.dilation();
    const auto radii = numerics::logspace(r_min, r_max, samples);
    std::vector<double> log_r;
    std::vector<double> log_g;
    double D = 0.0;
    for (double r : radii) {
        double sup = 0.0;
        for (int j = 0; j < kShellPoints; ++j) {
            const double rr = r + period * j / kShellPoints;
            const double g = std::fabs(mu_hat_radial_derivative(mu, rr));
            sup = std::max(sup, g);
            D = std::max(D, g * std::pow(1.0 + rr, 1.0 + doc.eta));
        }
        if (sup > 1e-300) {
            log_r.push_back(std::log(r));
            log_g.push_back(std::log(sup));
        }
    }
    out.D_est = D;
    if (log_r.empty()) {
        if (mu.kind() == MeasureKind::ZeroGradient) {
            out.eta_est = std::numeric_limits<double>::infinity();
            return out;
        }
        throw FitError("decay_profile: all sampled gradients vanish");
    }
    const auto fit = numerics::linear_fit(log_r, log_g);
    out.eta_est = -fit.slope - 1.0;
    out.residual = fit.residual;
    return out;
}

}  // namespace restrictlab::measures
