#include "fraclab/gradient.hpp"

namespace fraclab {

ScalarField gradient(const ScalarField& u) {
    const auto& grid = *u.grid();
    const std::size_t n = grid.size();
    const double h = grid.h();
    ScalarField du(u.grid());
    for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    du[0] = u[0] / h;
    du[n - 1] = -u[n - 1] / h;
    return du;
}

}  // namespace fraclab
