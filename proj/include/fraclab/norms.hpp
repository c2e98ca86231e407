#pragma once

#include "fraclab/grid.hpp"

namespace fraclab {

// All integrals use the rectangle rule on interior nodes with weight h and
// index-ascending summation.

/// ( Σ |Du|^q δ^{q w_exp} h )^{1/q}. Throws InvalidArgument for q < 1.
double weighted_grad_norm(const ScalarField& u, double q, double w_exp = 0.0);

/// Σ |Du|^a δ^{a w_exp} h, the un-rooted form used by integrability scans.
double grad_power_integral(const ScalarField& u, double a, double w_exp = 0.0);

/// ( Σ |u|^q h )^{1/q}.
double lp_norm(const ScalarField& u, double q);

/// Σ u h.
double integral(const ScalarField& u);

/// Σ δ^t h over the interior nodes of `grid`.
double delta_power_integral(const Grid& grid, double t);

/// Pointwise clamp to [-k, k]. Throws InvalidArgument for k ≤ 0.
ScalarField truncate(const ScalarField& u, double k);

struct HardyRatio {
    double ratio = 0.0;
    double numerator = 0.0;    ///< Σ |φ|^p / δ^p h
    double denominator = 0.0;  ///< Σ |Dφ|^p h
    bool degenerate = false;   ///< 0/0, reported as ratio 0
};

/// Discrete Hardy quotient. Throws InvalidArgument for p ≤ 1 and
/// DegenerateInput when only the denominator vanishes.
HardyRatio hardy_ratio(const ScalarField& phi, double p);

}  // namespace fraclab
