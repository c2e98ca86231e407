#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {

GridPtr build_grid(std::size_t n_interior) {
    if (n_interior < 3) {
        throw InvalidArgument("build_grid: need at least 3 interior nodes, got " +
                              std::to_string(n_interior));
    }
    auto grid = std::shared_ptr<Grid>(new Grid());
    const auto n = n_interior;
    grid->h_ = 2.0 / static_cast<double>(n + 1);
    grid->nodes_.resize(n);
    grid->delta_.resize(n);
    // Nodes are built from the integer offset to the nearer endpoint so that
    // x[i] == -x[n-1-i] holds bit-exactly.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t from_left = i + 1;
        const std::size_t from_right = n - i;
        const double d = static_cast<double>(std::min(from_left, from_right)) * grid->h_;
        double x = 1.0 - d;
        if (2 * from_left < n + 1) {
            x = -x;
        } else if (2 * from_left == n + 1) {
            x = 0.0;
        }
        grid->nodes_[i] = x;
        grid->delta_[i] = (2 * from_left == n + 1) ? 1.0 : d;
    }
    return grid;
}

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) {
        throw InvalidArgument("ScalarField: " + std::to_string(values_.size()) +
                              " values for a grid of " + std::to_string(grid_->size()) +
                              " nodes");
    }
}

double ScalarField::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    if (other.size() != size()) throw InvalidArgument("ScalarField: size mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    if (other.size() != size()) throw InvalidArgument("ScalarField: size mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

double max_excess(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size()) throw InvalidArgument("max_excess: size mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - b[i]);
    return worst;
}

}  // namespace fraclab
