#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Dense discretization of the fractional Laplacian on (-1, 1) with u ≡ 0
/// outside. The kernel is |x-y|^{-1-2s} with no normalizing constant:
///
///     (-Δ)^s u(x) = P.V. ∫ (u(x) - u(y)) |x-y|^{-1-2s} dy.
///
/// Textbook operators carry an extra factor c_{1,s}; results here differ
/// from those by exactly that factor.
///
/// Row i is the operator applied to u_h = Σ u_j φ_j at x_i, where φ_j are
/// hat functions. For |z| ≥ h the kernel is integrated exactly against u_h;
/// on |z| < h the symmetric difference u(x+z) + u(x-z) - 2u(x) is replaced
/// by its second-difference model (u_{i+1} - 2u_i + u_{i-1}) z²/h².
/// The matrix is symmetric Toeplitz, A_ij < 0 off the diagonal, and
/// strictly diagonally dominant because the mass of the kernel beyond the
/// support of u_h lands on the diagonal.
class FracOp {
public:
    FracOp() = default;

    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_->size(); }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return *matrix_; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return (*matrix_)(i, j); }

    /// A·u.
    [[nodiscard]] ScalarField apply(const ScalarField& u) const;
    /// (A·u)[i] in O(n).
    [[nodiscard]] double apply_row(const ScalarField& u, std::size_t i) const;

    /// Coefficient of the near-field second difference, h^{-2s}/(2-2s).
    [[nodiscard]] double near_coefficient() const noexcept { return near_coeff_; }

private:
    friend FracOp assemble(GridPtr grid, double s);

    GridPtr grid_;
    double s_ = 0.0;
    double near_coeff_ = 0.0;
    std::shared_ptr<const Eigen::MatrixXd> matrix_;
};

/// Throws InvalidArgument for s outside (1/2, 1).
FracOp assemble(GridPtr grid, double s);

/// Cholesky factorization of a FracOp. Read-only after construction, so a
/// single instance may serve concurrent solves.
class FactoredOp {
public:
    explicit FactoredOp(FracOp op);

    [[nodiscard]] const FracOp& op() const noexcept { return op_; }
    [[nodiscard]] const GridPtr& grid() const noexcept { return op_.grid(); }

    /// Solves A·u = f with one step of iterative refinement.
    [[nodiscard]] ScalarField solve(const ScalarField& f) const;

private:
    FracOp op_;
    std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>> llt_;
};

/// ε-truncated operator at node i: ∫_{|x-y| ≥ ε} (u(x) - u(y)) |x-y|^{-1-2s} dy,
/// where u is the piecewise-linear interpolant for |x-y| ≥ h and the
/// second-difference model for |x-y| < h. As ε ↓ 0 the value converges to
/// (A·u)[i]. Throws InvalidArgument for ε ≤ 0.
double apply_regularized(const FracOp& op, const ScalarField& u, std::size_t i, double eps);

/// (-Δ)^s u(x) for u supported in [-1, 1] by tanh-sinh quadrature of
///   ∫₀^∞ (2u(x) - u(x+z) - u(x-z)) z^{-1-2s} dz,
/// split at z = 1-|x| and z = 1+|x| where u may have kinks. `u` must be
/// smooth inside (-1, 1) and is read as 0 outside.
double reference_operator(const std::function<double(double)>& u, double x, double s);

/// Binary dump for regression diffing: three little-endian int64
/// (n, round(s·10⁶), version) followed by n² float64 in row-major order.
inline constexpr std::int64_t kOperatorDumpVersion = 1;
void write_operator_dump(const FracOp& op, const std::filesystem::path& path);

struct OperatorDump {
    std::int64_t n = 0;
    std::int64_t s_micro = 0;
    std::int64_t version = 0;
    std::vector<double> row_major;
};
OperatorDump read_operator_dump(const std::filesystem::path& path);

}  // namespace fraclab
