#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fraclab {

/// Uniform grid on the interval (-1, 1). Only interior nodes carry
/// unknowns; every field is implicitly zero on the closed exterior.
class Grid {
public:
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] double delta(std::size_t i) const { return delta_[i]; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    /// Distance to the boundary, dist(x, {-1, 1}).
    [[nodiscard]] std::span<const double> delta() const noexcept { return delta_; }

private:
    friend std::shared_ptr<const Grid> build_grid(std::size_t n_interior);
    Grid() = default;

    double h_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> delta_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws InvalidArgument for n_interior < 3.
GridPtr build_grid(std::size_t n_interior);

/// Grid-sampled function with the exterior value fixed at 0.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid);
    ScalarField(GridPtr grid, std::vector<double> values);

    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    [[nodiscard]] double sup_norm() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double c) noexcept;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// max_i (a[i] - b[i]); positive when a ≤ b is violated somewhere.
double max_excess(const ScalarField& a, const ScalarField& b);

/// Samples `fn` at the interior nodes.
template <class Fn>
ScalarField sample(const GridPtr& grid, Fn&& fn) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) out[i] = fn(grid->node(i));
    return out;
}

}  // namespace fraclab
