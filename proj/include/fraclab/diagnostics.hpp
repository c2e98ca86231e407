#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/exponents.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/refinement.hpp"

namespace fraclab {

/// Outcome of a refinement scan: one row per swept value, one column per
/// refinement level.
struct ScanResult {
    std::string kind;
    std::string sweep_name;                       ///< a, q, p, t, ...
    std::string level_name;                       ///< n or 1/eps
    std::vector<double> parameter_grid;           ///< swept values, ascending
    std::vector<double> levels;                   ///< refinement levels, ascending
    std::vector<std::vector<double>> observable;  ///< [sweep][level]
    std::vector<RefinementVerdict> verdicts;      ///< per swept value
    std::vector<double> fit_exponent;             ///< per swept value, NaN when not fitted
    std::vector<std::string> labels;              ///< per swept value
    double predicted_threshold = 0.0;
    /// Midpoint between the last converging and the first diverging value;
    /// NaN when the verdicts never flip.
    double empirical_threshold = 0.0;
    /// No converging verdict above a diverging one.
    bool monotone_verdicts = true;
    ExponentSet exponents;
    std::vector<std::string> notes;
};

struct ScanOptions {
    unsigned threads = 1;  ///< worker threads across refinement levels
    RefinementBands bands{};
};

/// ∫|Du|^a δ^{a w_exp} for the linear solve A u = f across refinements.
ScanResult gradient_integrability_scan(double s, const std::string& f_spec, const std::vector<double>& a_values,
                                       const std::vector<std::size_t>& refinements, double w_exp = 0.0,
                                       const ScanOptions& options = {});

/// Weighted norms ‖|Du| δ^{1-s}‖_{L^q} for data δ^{-1/m + 0.01} (in L^m,
/// not in L^{m+0.1}); the prediction is mN/(N - m(2s-1)).
ScanResult sobolev_gain_scan(double s, double m, const std::vector<double>& q_values,
                             const std::vector<std::size_t>& refinements, const ScanOptions& options = {});

/// ‖Du_ε‖_{L^p} for A u_ε = bump of width ε and given mass at 0, on a
/// fixed grid; the level is 1/ε. fit_exponent is the slope of log‖Du_ε‖
/// against log(1/ε).
ScanResult dirac_blowup_scan(double s, const std::vector<double>& p_values, const std::vector<double>& eps_values,
                             std::size_t n_grid, double mass = 1.0, const ScanOptions& options = {});

/// ∫ δ^{-p(1-s)} per refinement, with ‖Du‖_{L^p} of the solution of
/// A u = 1 recorded alongside in `auxiliary`.
struct NonexistenceScan {
    ScanResult scan;
    std::vector<std::vector<double>> auxiliary;  ///< [p][level] ‖Du‖_{L^p}
};
NonexistenceScan nonexistence_scan(double s, const std::vector<double>& p_values,
                                   const std::vector<std::size_t>& refinements, const ScanOptions& options = {});

/// Hardy quotients of φ_t = (1-x²)^t across refinements. The verdict
/// describes the numerator ∫ |φ|^p/δ^p; a diverging numerator is the
/// non-Hardy flag. `observable` holds the ratios.
struct HardyScan {
    ScanResult scan;
    std::vector<std::vector<double>> numerators;
    std::vector<bool> non_hardy;
};
HardyScan hardy_scan(double p, const std::vector<double>& t_values, const std::vector<std::size_t>& refinements);

struct ViscosityOptions {
    std::vector<double> eps_multiples{2.0, 4.0};  ///< cutoffs in units of h
    double boundary_layer = 5.0;                  ///< nodes with δ < this·h are skipped
    double interior_radius = 0.5;                 ///< window |x| ≤ r for the interior residual
    bool touching = false;                        ///< also evaluate with touching-quadratic slopes
};

struct ViscosityReport {
    std::vector<double> eps_values;
    std::vector<double> residuals;         ///< per node, NaN inside the boundary layer
    double sup_residual = 0.0;             ///< max |r_i| over δ ≥ boundary_layer·h
    double interior_residual = 0.0;        ///< max |r_i| over |x| ≤ interior_radius
    std::size_t worst_node = 0;
    /// min over the window of (-Δ)^s u + |φ'|^p - f, with φ a quadratic
    /// touching u from below; NaN unless requested.
    double touching_min = std::numeric_limits<double>::quiet_NaN();
};

/// r_i = V_0(i) + |Du_i|^p - f_i, where V_0 extrapolates apply_regularized
/// at the cutoffs to ε = 0 with the observed order 2 - 2s. `p` empty
/// drops the gradient term (linear problem).
ViscosityReport viscosity_residual_check(const FracOp& op, const ScalarField& u, std::optional<double> p,
                                         const ScalarField& f, const ViscosityOptions& options = {});

/// Label for the non-existence bands: "existence regime", "theorem regime"
/// (p above the proven threshold) or "conjecture regime" (above 1/(1-s)
/// but not covered by the theorem).
std::string nonexistence_label(const ExponentSet& e, double p);

}  // namespace fraclab
