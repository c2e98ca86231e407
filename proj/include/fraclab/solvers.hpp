#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/fraclap.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

enum class Scheme { Linear, Regularized, Monotone, FixedPoint, Reaction, Newton };

std::string to_string(Scheme scheme);
/// Throws InvalidArgument for an unknown tag.
Scheme parse_scheme(const std::string& tag);

/// Outcome of one solver run. Non-convergence is a reported outcome.
struct SolveReport {
    Scheme scheme = Scheme::Linear;
    std::size_t iterates_outer = 0;
    std::size_t iterates_inner = 0;
    /// Sup-norm residual per iterate (fixed-point residual ‖T(u) - u‖∞ for
    /// the Picard schemes, ‖F(u)‖∞ for Newton).
    std::vector<double> residual_history;
    /// weighted_grad_norm per iterate, parallel to residual_history.
    std::vector<double> norm_ledger;
    /// Ordering violation per iterate (monotone schemes), parallel to residual_history.
    std::vector<double> violation_history;
    /// Worst breach of the expected ordering, 0 if none.
    double monotone_violation = 0.0;
    double k_violation = 0.0;
    double n_violation = 0.0;
    bool ordering_flagged = false;

    bool converged = false;
    std::string reason;  ///< converged | max-iter | ball-exit | blowup | stagnated
    double tolerance = 0.0;
    /// Sup-norm residual of the discrete equation at `final`.
    double equation_residual = std::numeric_limits<double>::quiet_NaN();
    ScalarField final;

    // Monotone and reaction schemes.
    ScalarField last_iterate;          ///< u at the largest n, before extrapolation
    std::vector<double> n_schedule;    ///< n values actually used
    std::vector<double> mass_history;  ///< ∫ g u_n per outer iterate (reaction)
    double admissibility = std::numeric_limits<double>::quiet_NaN();

    // Fixed-point scheme.
    double ball_threshold = std::numeric_limits<double>::quiet_NaN();      ///< l^{1/(2s)}
    double ball_threshold_alt = std::numeric_limits<double>::quiet_NaN();  ///< l^{1/p}
    std::string binding_threshold;  ///< which threshold the largest B_j came closest to
    bool ball_exited = false;
    bool data_above_cap = false;
};

/// A u = f through the factorization.
ScalarField solve_linear(const FactoredOp& op, const ScalarField& f);
ScalarField solve_linear(const FracOp& op, const ScalarField& f);

/// Picard damping policy shared by the regularized schemes.
struct DampingPolicy {
    double theta = 0.5;       ///< initial damping, 0 < θ ≤ 1
    int max_halvings = 6;     ///< θ halves whenever the residual increases
};

struct RegularizedParams {
    double p = 1.2;
    double n_reg = 1.0;   ///< saturation level of g_n(t) = t^p / (1 + t^p/n)
    double k_trunc = 1.0; ///< data truncation level T_k
    DampingPolicy damping{};
    double tol = 1e-8;
    std::size_t max_iter = 1000;
};

/// g_n(t) = t^p / (1 + t^p / n); n = +inf gives t^p.
double saturated_power(double t, double p, double n_reg);

/// Damped Picard for A u + g_n(|Du|) = T_k(f):
///   u ← (1-θ) u + θ A⁻¹(T_k(f) - g_n(|Du|)).
/// Converged when ‖T(u) - u‖∞ ≤ tol. Throws NumericalFailure on NaN.
SolveReport solve_regularized(const FactoredOp& op, const ScalarField& f, const RegularizedParams& params,
                              const std::optional<ScalarField>& initial = std::nullopt);

struct MonotoneParams {
    double p = 1.2;
    std::size_t k_max = 50;
    std::vector<double> n_sequence{2, 4, 8, 16, 32, 64, 128, 256};
    double tol_inner = 1e-8;   ///< Picard tolerance inside each (n, k) solve
    double tol_outer = 1e-6;   ///< stagnation of successive k- and n-iterates, relative to max(1, ‖u‖∞)
    double tol_mono = 1e-8;    ///< ordering violations above 10·tol_mono·‖u‖∞ flag the report
    DampingPolicy damping{};
    std::size_t max_iter = 1000;
};

/// Double loop: increasing k (truncation) inside increasing n (saturation).
/// `final` is the Richardson limit 2u_N - u_{N/2} in 1/n when the last two
/// n differ by a factor 2, otherwise the last iterate.
/// Throws InvalidArgument unless 1 < p < 2s and f ≥ 0.
SolveReport solve_monotone(const FactoredOp& op, const ScalarField& f, const MonotoneParams& params);

struct FixedPointConfig {
    double p = 2.0;
    double m = 10.0;
    double l = 1.0;
    double lambda_cap = std::numeric_limits<double>::infinity();
    std::size_t max_iter = 500;
    double tol = 1e-10;
};

/// Picard v ← A⁻¹(f - |Dv|^p) from v = 0, logging the ball functional
/// B_j = weighted_grad_norm(v^j, p·m, 1-s) against l^{1/(2s)}.
/// Throws InvalidArgument unless 2s ≤ p < s/(1-s) and m > 1/(p'(2s-1)).
SolveReport solve_fixed_point(const FactoredOp& op, const ScalarField& f, const FixedPointConfig& cfg);

struct ThresholdSearch {
    double c_star = 0.0;      ///< midpoint of the final bracket
    double c_converged = 0.0; ///< largest amplitude seen converging
    double c_failed = 0.0;    ///< smallest amplitude seen failing
    std::size_t evaluations = 0;
    std::string failure_reason;
};

/// Bisection on c for f = c·shape between convergence and failure of
/// solve_fixed_point. The bracket is grown geometrically from c_hi until
/// a failure is seen. Stops when (c_failed - c_converged) ≤ rel_tol·c_failed.
ThresholdSearch fixed_point_threshold(const FactoredOp& op, const ScalarField& shape, const FixedPointConfig& cfg,
                                      double c_hi = 1.0, double rel_tol = 1e-3);

struct ReactionParams : MonotoneParams {
    /// The index n saturates the reaction term λ g u/(1 + u/n). With this
    /// flag the absorption is saturated as well, g_n(|Du|); at λ = 0 the run
    /// then reproduces solve_monotone bit for bit. Without it the absorption
    /// is the plain |Du|^p, which is what bounds ∫ g u_n uniformly in n.
    bool saturate_absorption = false;
};

/// Monotone double loop for A u + |Du|^p = λ g u⁺/(1 + u⁺/n) + T_k(f).
/// u_n increases with n unless the absorption is saturated too.
/// Throws DegenerateInput when g fails the admissibility check.
SolveReport solve_reaction(const FactoredOp& op, const ScalarField& f, const ScalarField& g, double lambda,
                           const ReactionParams& params);

/// Trial fields vanishing at ∂Ω: powers (1-x²)^t, bumps, and random sine
/// series drawn from `seed`. At least 50 members.
std::vector<ScalarField> standard_trial_family(const GridPtr& grid, std::uint64_t seed = 0, std::size_t random_members = 24);

/// min over the family of ‖Dφ‖_{L^p} / ∫ g|φ|. Throws InvalidArgument for
/// negative g and DegenerateInput when every ∫ g|φ| vanishes.
double check_admissible(const ScalarField& g, double p, const std::vector<ScalarField>& trial_family);
double check_admissible(const ScalarField& g, double p);

struct NewtonParams {
    double p = 1.2;
    double n_reg = std::numeric_limits<double>::infinity();
    double mu = 1e-8;   ///< |Du|^p ≈ (|Du|² + μ²)^{p/2}
    double tol = 1e-12; ///< on ‖F(u)‖∞ / max(1, ‖f‖∞)
    std::size_t max_iter = 100;
};

/// Damped Newton on A u + g_n((|Du|² + μ²)^{1/2}) = f with backtracking
/// line search, started from A⁻¹f.
SolveReport solve_newton(const FactoredOp& op, const ScalarField& f, const NewtonParams& params);

/// ‖A u + g_n(|Du|) - f‖∞ for the discrete equation.
double equation_residual(const FracOp& op, const ScalarField& u, const ScalarField& f, double p,
                         double n_reg = std::numeric_limits<double>::infinity());

}  // namespace fraclab
