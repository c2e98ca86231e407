#pragma once

// Independent reference values for the unit tests. Nothing here calls into
// the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace fraclab::oracle {

/// Normalizing constant c_{N,s} of the textbook fractional Laplacian.
inline double c_norm(int N, double s) {
    const double n = N;
    return s * std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * n + s) /
           (std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(1.0 - s));
}

/// Unnormalized (-Δ)^s (1-|x|²)_+^s, constant on the unit ball in R^N.
inline double torsion_eigen(int N, double s) {
    const double n = N;
    const double normalized =
        std::pow(2.0, 2.0 * s) * std::tgamma(1.0 + s) * std::tgamma(0.5 * n + s) / std::tgamma(0.5 * n);
    return normalized / c_norm(N, s);
}

/// Green-kernel prefactor for the unnormalized operator on the disc.
inline double disc_kappa(double s) {
    const double pi = std::numbers::pi;
    return s * std::tgamma(1.0 + s) / (pi * pi * std::tgamma(1.0 - s) * std::tgamma(s) * std::tgamma(s));
}

/// ∫_0^{r0} t^{s-1}/(1+t) dt by substitution t = v^{1/s}.
inline double green_tail(double r0, double s) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double v_max = std::pow(r0, s);
    return ts.integrate([s](double v) { return 1.0 / (s * (1.0 + std::pow(v, 1.0 / s))); }, 0.0, v_max);
}

/// ∫ φ(y) |x - y|^{-1-2s} dy for the hat φ centred at c with half-width h,
/// assuming |x - c| ≥ 2h so the integrand is smooth.
inline double hat_kernel_integral(double x, double c, double h, double s) {
    using boost::math::quadrature::gauss_kronrod;
    auto k = [x, s](double y) { return std::pow(std::abs(x - y), -1.0 - 2.0 * s); };
    const double left = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return (y - (c - h)) / h * k(y); }, c - h, c, 15, 1e-14);
    const double right = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return ((c + h) - y) / h * k(y); }, c, c + h, 15, 1e-14);
    return left + right;
}

}  // namespace fraclab::oracle
