#include "fraclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/gradient.hpp"

namespace fraclab {

double grad_power_integral(const ScalarField& u, double a, double w_exp) {
    const auto du = gradient(u);
    const auto& grid = *u.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = std::abs(du[i]);
        if (g == 0.0) continue;
        double term = std::pow(g, a);
        if (w_exp != 0.0) term *= std::pow(grid.delta(i), a * w_exp);
        sum += term;
    }
    return sum * grid.h();
}

double weighted_grad_norm(const ScalarField& u, double q, double w_exp) {
    if (!(q >= 1.0)) {
        std::ostringstream msg;
        msg << "weighted_grad_norm: exponent q = " << q << " must be >= 1";
        throw InvalidArgument(msg.str());
    }
    // Scale by the largest weighted gradient before raising to q, so that
    // large q (the ball functional uses q = p·m) does not overflow.
    const auto du = gradient(u);
    const auto& grid = *u.grid();
    std::vector<double> w(grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w[i] = std::abs(du[i]) * (w_exp != 0.0 ? std::pow(grid.delta(i), w_exp) : 1.0);
        scale = std::max(scale, w[i]);
    }
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (double wi : w) sum += std::pow(wi / scale, q);
    return scale * std::pow(sum * grid.h(), 1.0 / q);
}

double lp_norm(const ScalarField& u, double q) {
    if (!(q >= 1.0)) throw InvalidArgument("lp_norm: exponent must be >= 1");
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::abs(v), q);
    return std::pow(sum * u.grid()->h(), 1.0 / q);
}

double integral(const ScalarField& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v;
    return sum * u.grid()->h();
}

double delta_power_integral(const Grid& grid, double t) {
    double sum = 0.0;
    for (double d : grid.delta()) sum += std::pow(d, t);
    return sum * grid.h();
}

ScalarField truncate(const ScalarField& u, double k) {
    if (!(k > 0.0)) {
        std::ostringstream msg;
        msg << "truncate: level k = " << k << " must be positive";
        throw InvalidArgument(msg.str());
    }
    ScalarField out = u;
    for (double& v : out.values()) v = std::clamp(v, -k, k);
    return out;
}

HardyRatio hardy_ratio(const ScalarField& phi, double p) {
    if (!(p > 1.0)) throw InvalidArgument("hardy_ratio: exponent p must be > 1");
    const auto& grid = *phi.grid();
    HardyRatio r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.numerator += std::pow(std::abs(phi[i]) / grid.delta(i), p);
    }
    r.numerator *= grid.h();
    r.denominator = grad_power_integral(phi, p);
    if (r.denominator == 0.0) {
        if (r.numerator != 0.0) {
            throw DegenerateInput("hardy_ratio: zero gradient integral with nonzero numerator");
        }
        r.degenerate = true;
        return r;
    }
    r.ratio = r.numerator / r.denominator;
    return r;
}

}  // namespace fraclab
