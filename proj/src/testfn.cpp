#include "restrictlab/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "restrictlab/errors.hpp"

namespace restrictlab::testfn {

namespace {

constexpr double kPi = M_PI;

// Half-width of the whitened lattice: exp(-L^2) is below 1e-18.
constexpr double kLatticeHalfWidth = 6.5;
constexpr std::size_t kLatticeBudget = std::size_t{1} << 24;

double tolerance_floor(double magnitude) { return std::max(magnitude, 1e-12); }

// Enumerates every point of the (n+1)^d lattice on [-L, L]^d, calling visit
// with the multi-index. Points whose indices are all even are skipped when
// `skip_even` is set; they were already visited at the previous level.
template <class Visit>
void for_each_lattice_point(int d, int n, bool skip_even, Visit&& visit) {
    std::vector<int> idx(d, 0);
    while (true) {
        bool all_even = true;
        for (int k = 0; k < d; ++k) all_even = all_even && (idx[k] % 2 == 0);
        if (!(skip_even && all_even)) visit(idx);
        int k = 0;
        while (k < d && idx[k] == n) {
            idx[k] = 0;
            ++k;
        }
        if (k == d) break;
        ++idx[k];
    }
}

// Trapezoid sums of exp(-|v|^2) g(v) over [-L, L]^d with step halving.
template <class Integrand>
Complex whitened_lattice(int d, Integrand&& g, double rel_tol, const char* what) {
    int n = 16;
    Complex raw(0.0, 0.0);
    Eigen::VectorXd v(d);
    auto add_points = [&](int intervals, bool skip_even) {
        const double h = 2.0 * kLatticeHalfWidth / intervals;
        Complex part(0.0, 0.0);
        for_each_lattice_point(d, intervals, skip_even, [&](const std::vector<int>& idx) {
            for (int k = 0; k < d; ++k) v[k] = -kLatticeHalfWidth + idx[k] * h;
            part += std::exp(-v.squaredNorm()) * g(v);
        });
        return part;
    };
    raw = add_points(n, false);
    double h = 2.0 * kLatticeHalfWidth / n;
    Complex previous = raw * std::pow(h, d);
    double change = 0.0;
    double last_change = 0.0;
    while (true) {
        const std::size_t next_points = static_cast<std::size_t>(std::pow(2.0 * n + 1.0, d));
        if (next_points > kLatticeBudget) {
            throw QuadratureError(std::string(what) + ": lattice budget exhausted", change);
        }
        raw += add_points(2 * n, true);
        n *= 2;
        h = 2.0 * kLatticeHalfWidth / n;
        const Complex current = raw * std::pow(h, d);
        last_change = change;
        change = std::abs(current - previous);
        const double target = rel_tol * tolerance_floor(std::abs(current));
        if (change <= target) return current;
        // Trapezoid sums of analytic integrands converge geometrically; once
        // the changes shrink at least tenfold, change^2 / last_change bounds
        // the error of the finer level.
        if (last_change > 0.0 && change <= 0.1 * last_change && change * change <= target * last_change) {
            return current;
        }
        previous = current;
    }
}

Complex packet_average_gaussian(const GaussianPacket& f, double scale, const Eigen::VectorXd& xi) {
    // Integral of A exp(-pi x^T P x + 2 pi b^T x - pi c^T W^-2 c), P = W^-2 + scale^2 I,
    // b = W^-2 c + i (xi0 - xi).
    const int d = f.dimension();
    const Eigen::MatrixXd P = f.spatial_form() + scale * scale * Eigen::MatrixXd::Identity(d, d);
    const Eigen::LLT<Eigen::MatrixXd> llt(P);
    const Eigen::VectorXd real_b = f.spatial_form() * f.center();
    const Eigen::VectorXd imag_b = f.modulation() - xi;
    const Eigen::VectorXd pr = llt.solve(real_b);
    const Eigen::VectorXd pi = llt.solve(imag_b);
    const double det_p = llt.matrixL().determinant();  // sqrt(det P)
    const double re_quad = real_b.dot(pr) - imag_b.dot(pi);
    const double im_quad = 2.0 * real_b.dot(pi);
    const double c_form = f.center().dot(real_b);
    const Complex exponent = kPi * Complex(re_quad - c_form, im_quad);
    return f.amplitude() * std::exp(exponent) / det_p;
}

Complex packet_average_lattice(const GaussianPacket& f, const measures::AveragingMeasure& mu, double t,
                               const Eigen::VectorXd& xi, double rel_tol) {
    const int d = f.dimension();
    const double sqrt_pi = std::sqrt(kPi);
    const Eigen::MatrixXd map = f.width() / sqrt_pi;
    const Eigen::VectorXd freq = f.modulation() - xi;
    Eigen::VectorXd x(d);
    auto g = [&](const Eigen::VectorXd& v) {
        x.noalias() = f.center() + map * v;
        const double phase = 2.0 * kPi * freq.dot(x);
        return Complex(std::cos(phase), std::sin(phase)) * measures::mu_hat_radial(mu, t * x.norm());
    };
    const Complex integral = whitened_lattice(d, g, rel_tol, "average");
    return f.amplitude() * f.width_determinant() * std::pow(kPi, -0.5 * d) * integral;
}

void check_point(const TestFunction& f, const Eigen::VectorXd& y, const char* what) {
    if (y.size() != f.dimension()) throw ShapeError(std::string(what) + ": point has wrong dimension");
    if (!y.allFinite()) throw DomainError(std::string(what) + ": point must be finite");
}

}  // namespace

GaussianPacket::GaussianPacket(Eigen::VectorXd center, Eigen::MatrixXd width, Eigen::VectorXd modulation,
                               Complex amplitude)
    : center_(std::move(center)),
      width_(std::move(width)),
      modulation_(std::move(modulation)),
      amplitude_(amplitude) {
    const auto d = center_.size();
    if (d < 1) throw DomainError("GaussianPacket: dimension must be positive");
    if (width_.rows() != d || width_.cols() != d || modulation_.size() != d) {
        throw DomainError("GaussianPacket: center, width and modulation dimensions disagree");
    }
    if (!width_.isApprox(width_.transpose(), 1e-12)) throw DomainError("GaussianPacket: width must be symmetric");
    const Eigen::LLT<Eigen::MatrixXd> llt(width_);
    if (llt.info() != Eigen::Success) throw DomainError("GaussianPacket: width must be positive definite");
    det_ = llt.matrixL().determinant();
    det_ *= det_;
    sq_ = width_ * width_;
    inv_sq_ = sq_.inverse();
}

GaussianPacket GaussianPacket::standard(int d, Complex amplitude) { return isotropic(d, 1.0, amplitude); }

GaussianPacket GaussianPacket::isotropic(int d, double width, Complex amplitude) {
    return GaussianPacket(Eigen::VectorXd::Zero(d), width * Eigen::MatrixXd::Identity(d, d),
                          Eigen::VectorXd::Zero(d), amplitude);
}

Complex GaussianPacket::operator()(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd u = x - center_;
    const double phase = 2.0 * kPi * modulation_.dot(x);
    return amplitude_ * std::exp(Complex(-kPi * u.dot(inv_sq_ * u), phase));
}

Complex GaussianPacket::fourier(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd u = y - modulation_;
    const double phase = -2.0 * kPi * center_.dot(u);
    return amplitude_ * det_ * std::exp(Complex(-kPi * u.dot(sq_ * u), phase));
}

GaussianPacket GaussianPacket::dilated(double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("GaussianPacket::dilated: factor must be positive");
    // f(lambda x): center c / lambda, width W / lambda, modulation lambda xi0.
    return GaussianPacket(center_ / lambda, width_ / lambda, modulation_ * lambda, amplitude_);
}

TestFunction::TestFunction(GaussianPacket packet) : packets_{std::move(packet)} {}

TestFunction::TestFunction(std::vector<GaussianPacket> packets) : packets_(std::move(packets)) {
    if (packets_.empty()) throw DomainError("TestFunction: superposition must be nonempty");
    if (packets_.size() > kMaxTerms) throw DomainError("TestFunction: at most 64 packets");
    for (const auto& p : packets_) {
        if (p.dimension() != packets_.front().dimension()) {
            throw DomainError("TestFunction: packets must share a dimension");
        }
    }
}

Complex TestFunction::operator()(const Eigen::VectorXd& x) const {
    Complex sum(0.0, 0.0);
    for (const auto& p : packets_) sum += p(x);
    return sum;
}

TestFunction TestFunction::dilated(double lambda) const {
    std::vector<GaussianPacket> out;
    out.reserve(packets_.size());
    for (const auto& p : packets_) out.push_back(p.dilated(lambda));
    return TestFunction(std::move(out));
}

ScaledMeasureAverage::ScaledMeasureAverage(measures::AveragingMeasure m, double scale)
    : measure(std::move(m)), t(scale) {
    if (!(t > 0.0) || std::isinf(t)) throw DomainError("ScaledMeasureAverage: scale must be positive");
}

Complex ft_exact(const TestFunction& f, const Eigen::VectorXd& y) {
    check_point(f, y, "ft_exact");
    Complex sum(0.0, 0.0);
    for (const auto& p : f.packets()) sum += p.fourier(y);
    return sum;
}

double lp_norm(const TestFunction& f, double p, double rel_tol) {
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("lp_norm: p must lie in [1, 2]");
    const int d = f.dimension();
    if (f.is_single()) {
        const auto& g = f.packets().front();
        return std::abs(g.amplitude()) * std::pow(g.width_determinant(), 1.0 / p) * std::pow(p, -0.5 * d / p);
    }
    // Bounding box covering every packet out to 6.5 whitened units.
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = -lo;
    for (const auto& g : f.packets()) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.width());
        const double reach = kLatticeHalfWidth * eig.eigenvalues().maxCoeff() / std::sqrt(kPi);
        lo = lo.cwiseMin((g.center().array() - reach).matrix());
        hi = hi.cwiseMax((g.center().array() + reach).matrix());
    }
    const Eigen::VectorXd span = hi - lo;
    Eigen::VectorXd x(d);
    auto level_sum = [&](int n, bool skip_even) {
        double part = 0.0;
        for_each_lattice_point(d, n, skip_even, [&](const std::vector<int>& idx) {
            for (int k = 0; k < d; ++k) x[k] = lo[k] + span[k] * idx[k] / n;
            part += std::pow(std::abs(f(x)), p);
        });
        return part;
    };
    int n = 32;
    double raw = level_sum(n, false);
    double cell = span.prod() / std::pow(n, d);
    double previous = raw * cell;
    double change = 0.0;
    while (true) {
        if (std::pow(2.0 * n + 1.0, d) > static_cast<double>(kLatticeBudget)) {
            throw QuadratureError("lp_norm: lattice budget exhausted", change / std::max(previous, 1e-300));
        }
        raw += level_sum(2 * n, true);
        n *= 2;
        cell = span.prod() / std::pow(n, d);
        const double current = raw * cell;
        change = std::fabs(current - previous);
        // Relative tolerance on the norm, i.e. on the p-th root of the integral.
        if (change <= p * rel_tol * tolerance_floor(current)) return std::pow(current, 1.0 / p);
        previous = current;
    }
}

Complex average_by_quadrature(const TestFunction& f, const ScaledMeasureAverage& avg, const Eigen::VectorXd& xi,
                              double rel_tol) {
    check_point(f, xi, "average");
    if (avg.measure.dimension() != f.dimension()) throw ShapeError("average: measure dimension mismatch");
    Complex sum(0.0, 0.0);
    for (const auto& p : f.packets()) sum += packet_average_lattice(p, avg.measure, avg.t, xi, rel_tol);
    return sum;
}

Complex average(const TestFunction& f, const ScaledMeasureAverage& avg, const Eigen::VectorXd& xi, double rel_tol) {
    check_point(f, xi, "average");
    const auto& mu = avg.measure;
    if (mu.dimension() != f.dimension()) throw ShapeError("average: measure dimension mismatch");
    switch (mu.kind()) {
        case measures::MeasureKind::ZeroGradient: return ft_exact(f, xi);
        case measures::MeasureKind::GaussianDensity: {
            Complex sum(0.0, 0.0);
            for (const auto& p : f.packets()) sum += packet_average_gaussian(p, avg.t * mu.dilation(), xi);
            return sum;
        }
        default: return average_by_quadrature(f, avg, xi, rel_tol);
    }
}

}  // namespace restrictlab::testfn
