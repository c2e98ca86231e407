#include "fraclab/green_ball.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/exponents.hpp"

namespace fraclab {
namespace {

constexpr double kPi = std::numbers::pi;

/// ∫₀^{r₀} t^{s-1}/(1+t) dt = B(r₀/(1+r₀); s, 1-s), passed as u₀ directly.
double tail_integral(double u0, double s) {
    if (u0 <= 0.0) return 0.0;
    return boost::math::beta(s, 1.0 - s, std::min(u0, 1.0));
}

double unit_kernel(double dist2, double a, double s) {
    // u₀ = r₀/(1+r₀) = a/(a + |x-y|²) with a = (1-|x|²)(1-|y|²).
    const double u0 = a / (a + dist2);
    return std::pow(dist2, s - 1.0) * tail_integral(u0, s);
}

}  // namespace

double calibrate_kappa(double s) {
    require_order(s, "calibrate_kappa");
    boost::math::quadrature::tanh_sinh<double> ts;
    const double near = ts.integrate(
        [s](double r) {
            if (r <= 0.0) return 0.0;
            if (r < 1e-6) return s * std::pow(r, 1.0 - 2.0 * s);
            return -std::expm1(s * std::log1p(-r * r)) * std::pow(r, -1.0 - 2.0 * s);
        },
        0.0, 1.0);
    const double lambda = 2.0 * kPi * (near + 1.0 / (2.0 * s));
    const double phi = 2.0 * kPi * ts.integrate(
        [s](double rho) {
            if (rho <= 0.0) return 0.0;
            return std::pow(rho, 2.0 * s - 1.0) * tail_integral(1.0 - rho * rho, s);
        },
        0.0, 1.0);
    return 1.0 / (lambda * phi);
}

GreenKernel make_green_kernel(double s) {
    return GreenKernel{2, s, calibrate_kappa(s)};
}

double green_value(const GreenKernel& kernel, Point2 x, Point2 y) {
    const double nx = x.x * x.x + x.y * x.y;
    const double ny = y.x * y.x + y.y * y.y;
    if (!(nx < 1.0) || !(ny < 1.0)) throw InvalidArgument("green_value: points must lie in the open unit disc");
    const double dx = x.x - y.x;
    const double dy = x.y - y.y;
    const double dist2 = dx * dx + dy * dy;
    if (dist2 == 0.0) throw SingularInput("green_value: x = y");
    return kernel.kappa * unit_kernel(dist2, (1.0 - nx) * (1.0 - ny), kernel.s);
}

double green_value(Point2 x, Point2 y, double s) {
    return green_value(make_green_kernel(s), x, y);
}

double RadialProfile::operator()(double radius) const {
    if (r.empty()) return 0.0;
    if (radius <= r.front()) return values.front();
    if (radius >= r.back()) return values.back();
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const auto j = static_cast<std::size_t>(it - r.begin());
    const double t = (radius - r[j - 1]) / (r[j] - r[j - 1]);
    return (1.0 - t) * values[j - 1] + t * values[j];
}

RadialProfile sample_radial(const std::function<double(double)>& fn, std::size_t n) {
    if (n == 0) throw InvalidArgument("sample_radial: need at least one interval");
    RadialProfile out;
    for (std::size_t i = 0; i <= n; ++i) {
        const double r = static_cast<double>(i) / static_cast<double>(n);
        out.r.push_back(r);
        out.values.push_back(fn(r));
    }
    return out;
}

RadialProfile green_solve_radial(const RadialProfile& f, const GreenKernel& kernel, std::size_t n_r) {
    if (n_r == 0) throw InvalidArgument("green_solve_radial: n_r must be positive");
    if (f.r.size() != f.values.size() || f.r.size() < 2) {
        throw InvalidArgument("green_solve_radial: malformed radial profile");
    }
    for (double v : f.values) {
        if (!std::isfinite(v)) throw InvalidArgument("green_solve_radial: non-finite data sample");
    }
    const double s = kernel.s;
    boost::math::quadrature::tanh_sinh<double> radial;
    const bool flat = std::all_of(f.values.begin(), f.values.end(), [&](double v) { return v == f.values.front(); });

    RadialProfile out;
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r0 = static_cast<double>(i) / static_cast<double>(n_r);
        const double one_minus_x2 = 1.0 - r0 * r0;
        // Ray y = x + ρ(cos θ, sin θ), 0 ≤ ρ ≤ R(θ); the Jacobian ρ meets |x-y|^{2s-2}.
        auto ray = [&](double theta) {
            const double c = std::cos(theta);
            const double b = r0 * c;
            const double reach = -b + std::sqrt(b * b + one_minus_x2);
            if (reach <= 0.0) return 0.0;
            auto integrand = [&](double rho) {
                if (rho <= 0.0) return 0.0;
                const double ny = r0 * r0 + 2.0 * rho * b + rho * rho;
                const double a = one_minus_x2 * std::max(0.0, 1.0 - ny);
                const double u0 = a / (a + rho * rho);
                return std::pow(rho, 2.0 * s - 1.0) * tail_integral(u0, s) * f(std::sqrt(std::max(0.0, ny)));
            };
            // Split at the kinks of the interpolated profile, where |y| crosses a node.
            std::vector<double> cuts{0.0, reach};
            if (!flat) {
                for (double rk : f.r) {
                    const double disc = b * b - r0 * r0 + rk * rk;
                    if (disc < 0.0) continue;
                    for (double rho : {-b - std::sqrt(disc), -b + std::sqrt(disc)}) {
                        if (rho > 0.0 && rho < reach) cuts.push_back(rho);
                    }
                }
                std::sort(cuts.begin(), cuts.end());
            }
            double sum = 0.0;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                if (cuts[k + 1] > cuts[k]) sum += radial.integrate(integrand, cuts[k], cuts[k + 1]);
            }
            return sum;
        };
        // Integrand even in θ: integrate over [0, π] and double.
        const double angular =
            boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ray, 0.0, kPi, 12, flat ? 1e-10 : 1e-7);
        out.r.push_back(r0);
        out.values.push_back(2.0 * kernel.kappa * angular);
    }
    return out;
}

RadialProfile green_solve_radial(const RadialProfile& f, double s, std::size_t n_r) {
    return green_solve_radial(f, make_green_kernel(s), n_r);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DegenerateInput("log_log_slope: need at least 2 points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw DegenerateInput("log_log_slope: non-positive value in fit window");
        sx += std::log(x[k]);
        sy += std::log(y[k]);
    }
    const double n = static_cast<double>(x.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]) - mx;
        sxx += lx * lx;
        sxy += lx * (std::log(y[k]) - my);
    }
    if (sxx == 0.0) throw DegenerateInput("log_log_slope: all abscissae coincide");
    return sxy / sxx;
}

double boundary_exponent_fit(const ScalarField& u) {
    const Grid& grid = *u.grid();
    const std::size_t n = grid.size();
    // Outermost 10% of the nodes, half on each side.
    const auto per_side = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n)));
    std::vector<double> d, v;
    for (std::size_t k = 2; k < per_side; ++k) {
        for (std::size_t i : {k, n - 1 - k}) {
            d.push_back(grid.delta(i));
            v.push_back(u[i]);
        }
    }
    return log_log_slope(d, v);
}

double boundary_exponent_fit(const RadialProfile& u) {
    // Nodes ordered by radius; the outermost 10% are the last ones.
    const std::size_t n = u.r.size();
    const auto window = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n)));
    std::vector<double> d, v;
    for (std::size_t k = 2; k < window && k < n; ++k) {
        const std::size_t i = n - 1 - k;
        d.push_back(1.0 - u.r[i]);
        v.push_back(u.values[i]);
    }
    // A profile ending exactly on ∂B₁ carries a zero there; that node is
    // among the two excluded ones.
    return log_log_slope(d, v);
}

ComparabilityBand comparability_band(const GreenKernel& kernel, std::size_t pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto point = [&] {
        const double rad = std::sqrt(unit());
        const double ang = 2.0 * kPi * unit();
        return Point2{rad * std::cos(ang), rad * std::sin(ang)};
    };
    const double s = kernel.s;
    ComparabilityBand band{std::numeric_limits<double>::infinity(), 0.0, 0};
    while (band.pairs < pairs) {
        const Point2 x = point();
        const Point2 y = point();
        const double dist = std::hypot(x.x - y.x, x.y - y.y);
        const double dx = 1.0 - std::hypot(x.x, x.y);
        const double dy = 1.0 - std::hypot(y.x, y.y);
        if (dist == 0.0 || dx <= 0.0 || dy <= 0.0) continue;
        const double model = std::pow(dist, 2.0 * s - 2.0) * std::min(1.0, std::pow(dx / dist, s)) *
                             std::min(1.0, std::pow(dy / dist, s));
        const double ratio = green_value(kernel, x, y) / model;
        band.lower = std::min(band.lower, ratio);
        band.upper = std::max(band.upper, ratio);
        ++band.pairs;
    }
    return band;
}

}  // namespace fraclab
