#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "restrictlab/measures.hpp"

namespace restrictlab::testfn {

using Complex = std::complex<double>;

/// f(x) = A exp(2 pi i xi0 . x) exp(-pi (x - c)^T W^-2 (x - c)) with W symmetric
/// positive definite. Its transform is
///   f_hat(y) = A det(W) exp(-2 pi i c . (y - xi0)) exp(-pi (y - xi0)^T W^2 (y - xi0)).
class GaussianPacket {
public:
    /// Throws DomainError when W is not symmetric positive definite or shapes disagree.
    GaussianPacket(Eigen::VectorXd center, Eigen::MatrixXd width, Eigen::VectorXd modulation,
                   Complex amplitude = 1.0);

    /// exp(-pi |x|^2) in d dimensions, scaled by `amplitude`.
    static GaussianPacket standard(int d, Complex amplitude = 1.0);
    /// Isotropic packet with scalar width w.
    static GaussianPacket isotropic(int d, double width, Complex amplitude = 1.0);

    int dimension() const { return static_cast<int>(center_.size()); }
    const Eigen::VectorXd& center() const { return center_; }
    const Eigen::MatrixXd& width() const { return width_; }
    const Eigen::VectorXd& modulation() const { return modulation_; }
    Complex amplitude() const { return amplitude_; }
    double width_determinant() const { return det_; }
    /// W^-2, the spatial quadratic form.
    const Eigen::MatrixXd& spatial_form() const { return inv_sq_; }

    Complex operator()(const Eigen::VectorXd& x) const;
    Complex fourier(const Eigen::VectorXd& y) const;
    /// The packet g(x) = f(lambda x).
    GaussianPacket dilated(double lambda) const;

private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd width_;
    Eigen::VectorXd modulation_;
    Complex amplitude_;
    Eigen::MatrixXd inv_sq_;
    Eigen::MatrixXd sq_;
    double det_ = 1.0;
};

/// A single packet or a finite superposition of at most 64 packets.
class TestFunction {
public:
    static constexpr std::size_t kMaxTerms = 64;

    TestFunction(GaussianPacket packet);  // NOLINT: implicit by intent
    explicit TestFunction(std::vector<GaussianPacket> packets);

    int dimension() const { return packets_.front().dimension(); }
    bool is_single() const { return packets_.size() == 1; }
    const std::vector<GaussianPacket>& packets() const { return packets_; }

    Complex operator()(const Eigen::VectorXd& x) const;
    TestFunction dilated(double lambda) const;

private:
    std::vector<GaussianPacket> packets_;
};

/// mu_t with mu_hat_t(x) = mu_hat(t x).
struct ScaledMeasureAverage {
    ScaledMeasureAverage(measures::AveragingMeasure measure, double t);

    measures::AveragingMeasure measure;
    double t;
};

/// Closed-form Fourier transform, linear over superpositions.
Complex ft_exact(const TestFunction& f, const Eigen::VectorXd& y);

/// ||f||_p for p in [1, 2]. Closed form for one packet; otherwise an adaptive
/// trapezoid lattice refined until two levels agree to `rel_tol`.
double lp_norm(const TestFunction& f, double p, double rel_tol = 1e-8);

/// (f_hat * mu_t)(xi), evaluated as the Fourier transform of x -> f(x) mu_check(t x).
///
/// Gaussian measures use the closed-form complex Gaussian integral; the point
/// mass returns f_hat(xi). Other measures are integrated by a trapezoid lattice
/// in the packet's whitened coordinates, halving the step until successive
/// levels agree to rel_tol (absolute below magnitude 1e-12). Throws
/// QuadratureError when the lattice budget is exhausted.
Complex average(const TestFunction& f, const ScaledMeasureAverage& avg, const Eigen::VectorXd& xi,
                double rel_tol = 1e-6);

/// The lattice route of `average`, available for every measure so the Gaussian
/// fast path can be checked against it.
Complex average_by_quadrature(const TestFunction& f, const ScaledMeasureAverage& avg,
                              const Eigen::VectorXd& xi, double rel_tol = 1e-6);

}  // namespace restrictlab::testfn
