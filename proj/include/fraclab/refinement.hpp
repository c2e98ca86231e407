#pragma once

#include <span>
#include <string>

namespace fraclab {

enum class Verdict { Converging, Diverging, Inconclusive };

std::string to_string(Verdict v);

/// Classification thresholds for a quantity observed along a refinement
/// sequence (grid sizes, or 1/ε for mollifier widths).
struct RefinementBands {
    double diverging_ratio = 1.2;    ///< O_last / O_prev above this: diverging
    double converging_ratio = 1.05;  ///< below this: converging (unless the increments do not shrink)
    /// Growth exponent γ of the increments, d_last / d_prev = (L_last / L_prev)^γ.
    /// γ ≥ diverging_rate means the increments do not shrink (log or power divergence).
    double diverging_rate = -0.015;
    /// γ ≤ converging_rate means geometrically shrinking increments (finite limit).
    double converging_rate = -0.04;
    /// Relative last increment below which the sequence counts as stationary
    /// (converging), whatever the increment trend.
    double stagnation = 1e-3;
};

struct RefinementVerdict {
    Verdict verdict = Verdict::Inconclusive;
    double last_ratio = 1.0;           ///< O_last / O_prev
    double increment_rate = 0.0;       ///< γ, NaN with fewer than 3 points
    bool log_type = false;             ///< diverging with |γ| < 0.05
    bool by_fallback = false;          ///< decided by the increment rule, not the ratio bands
    double limit_estimate = 0.0;       ///< Aitken-extrapolated limit when converging
};

/// `levels` must be strictly increasing and positive; `observables` the
/// measured values (same length, at least 2).
RefinementVerdict classify_refinement(std::span<const double> levels,
                                      std::span<const double> observables,
                                      const RefinementBands& bands = {});

}  // namespace fraclab
