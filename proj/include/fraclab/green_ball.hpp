#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Green kernel of the unnormalized (-Δ)^s on the unit disc:
///
///     G(x, y) = κ |x-y|^{2s-2} ∫₀^{r₀} t^{s-1} (1+t)^{-1} dt,
///     r₀ = (1-|x|²)(1-|y|²) / |x-y|².
struct GreenKernel {
    int N = 2;
    double s = 0.75;
    double kappa = 0.0;
};

/// Kernel with κ fixed by requiring (-Δ)^s 𝔾_s[1] = 1 at the origin.
/// Throws InvalidArgument for s outside (1/2, 1).
GreenKernel make_green_kernel(double s);

/// κ for the kernel above, computed from two 1D quadratures:
///   λ = (-Δ)^s (1-|x|²)^s at 0 and Φ = 𝔾_s[1](0) with κ = 1.
double calibrate_kappa(double s);

/// G(x, y). Throws SingularInput for x = y and InvalidArgument when either
/// point lies outside the open disc.
double green_value(const GreenKernel& kernel, Point2 x, Point2 y);
double green_value(Point2 x, Point2 y, double s);

/// Radial function sampled at increasing radii r[0] = 0 < ... < r.back().
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> values;

    /// Linear interpolation; constant extrapolation past r.back().
    [[nodiscard]] double operator()(double radius) const;
};

/// Samples `fn` at r_i = i/n, i = 0..n (the last node is the boundary).
RadialProfile sample_radial(const std::function<double(double)>& fn, std::size_t n);

/// u(r_i) = ∫_{B₁} G(x_i, y) f(|y|) dy at r_i = i / n_r, i = 0..n_r-1.
/// Polar coordinates centred at x_i; the ray integrals absorb the
/// |x-y|^{2s-1} singularity and the δ^s decay at the far end.
/// Throws InvalidArgument for non-finite samples or n_r = 0.
RadialProfile green_solve_radial(const RadialProfile& f, const GreenKernel& kernel, std::size_t n_r);
RadialProfile green_solve_radial(const RadialProfile& f, double s, std::size_t n_r);

/// Least-squares slope of log u against log δ.
/// The window is the outermost 10% of nodes minus the 2 nodes nearest ∂Ω
/// (on each side, for the interval). Throws DegenerateInput when u ≤ 0 in
/// the window or fewer than 2 nodes remain.
double boundary_exponent_fit(const ScalarField& u);
double boundary_exponent_fit(const RadialProfile& u);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ComparabilityBand {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t pairs = 0;
};

/// Extremes over random pairs in the disc of
///   G(x,y) / [ |x-y|^{2s-2} (δ(x)^s/|x-y|^s ∧ 1)(δ(y)^s/|x-y|^s ∧ 1) ].
ComparabilityBand comparability_band(const GreenKernel& kernel, std::size_t pairs, std::uint64_t seed);

}  // namespace fraclab
