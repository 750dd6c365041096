#pragma once

// Reference computations that share no code path with the library.

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <string>

namespace oracles {

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline const double kPi = boost::math::constants::pi<double>();

/// J_alpha(z) by its power series in 50-digit arithmetic. At z = 50 the
/// cancellation costs about 22 digits, which still leaves over 25.
inline double bessel_series(double alpha, double z) {
    if (z == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    const mp50 a(alpha);
    const mp50 half = mp50(z) / 2;
    const mp50 h2 = half * half;
    mp50 term = boost::multiprecision::pow(half, a) / boost::math::tgamma(a + 1);
    mp50 sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= -h2 / (mp50(m) * (a + m));
        sum += term;
        if (boost::multiprecision::abs(term) < boost::multiprecision::abs(sum) * mp50("1e-40")) break;
    }
    return static_cast<double>(sum);
}

/// Adaptive 61-point Gauss-Kronrod, a higher order than the library's own rule.
template <class F>
double adaptive(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double x) { return f(x); }, a, b, 12, 1e-13);
}

/// Volume of the unit ball in R^n.
inline double ball_volume(int n) { return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

/// Radial Fourier transform of the unit ball or unit sphere measure, by
/// projecting onto one axis: mu_hat(r e_1) = int_{-1}^1 g(u) cos(2 pi r u) du,
/// where g is the (d-1)-dimensional slice mass at height u. With u = sin(theta)
/// the endpoint singularity of g disappears.
inline double slice_transform(const std::string& kind, int d, double r) {
    const double c = kind == "ball" ? ball_volume(d - 1) : (d - 1) * ball_volume(d - 1);
    const double e = kind == "ball" ? (d - 1) / 2.0 : (d - 3) / 2.0;
    return adaptive(
        [&](double th) {
            const double cs = std::cos(th);
            return c * std::pow(cs, 2.0 * e + 1.0) * std::cos(2.0 * kPi * r * std::sin(th));
        },
        -kPi / 2.0, kPi / 2.0);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracles
