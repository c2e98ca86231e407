#include "fraclab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "fraclab/data_spec.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/gradient.hpp"
#include "fraclab/green_ball.hpp"
#include "fraclab/norms.hpp"

namespace fraclab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Runs task(j) for j < count on up to `threads` workers. Each task writes
/// only its own slot, so results do not depend on the thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t j = 0; j < count; ++j) task(j);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t j = w; j < count; j += workers) {
                try {
                    task(j);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void require_ascending(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw InvalidArgument(std::string(what) + " must not be empty");
    for (std::size_t j = 1; j < v.size(); ++j) {
        if (!(v[j] > v[j - 1])) throw InvalidArgument(std::string(what) + " must be strictly increasing");
    }
}

std::vector<double> as_levels(const std::vector<std::size_t>& refinements) {
    std::vector<double> out(refinements.begin(), refinements.end());
    require_ascending(out, "refinements");
    if (out.size() < 2) throw InvalidArgument("refinements: need at least two levels");
    return out;
}

/// Fills verdicts, thresholds and the monotonicity flag from `observable`.
void finish_scan(ScanResult& scan, const RefinementBands& bands) {
    scan.verdicts.clear();
    for (const auto& row : scan.observable) scan.verdicts.push_back(classify_refinement(scan.levels, row, bands));
    if (scan.fit_exponent.empty()) scan.fit_exponent.assign(scan.parameter_grid.size(), kNaN);
    if (scan.labels.empty()) scan.labels.assign(scan.parameter_grid.size(), "");

    scan.empirical_threshold = kNaN;
    scan.monotone_verdicts = true;
    std::optional<std::size_t> first_diverging;
    for (std::size_t j = 0; j < scan.verdicts.size(); ++j) {
        const Verdict v = scan.verdicts[j].verdict;
        if (v == Verdict::Diverging && !first_diverging) first_diverging = j;
        if (v == Verdict::Converging && first_diverging) scan.monotone_verdicts = false;
    }
    if (first_diverging) {
        std::optional<std::size_t> last_converging;
        for (std::size_t j = 0; j < *first_diverging; ++j) {
            if (scan.verdicts[j].verdict == Verdict::Converging) last_converging = j;
        }
        if (last_converging) {
            scan.empirical_threshold =
                0.5 * (scan.parameter_grid[*last_converging] + scan.parameter_grid[*first_diverging]);
        }
    }
}

struct LevelSolve {
    GridPtr grid;
    ScalarField u;
};

LevelSolve linear_solve(double s, std::size_t n, const std::string& f_spec) {
    GridPtr grid = build_grid(n);
    FactoredOp op(assemble(grid, s));
    ScalarField f = realize(f_spec, grid);
    return {grid, op.solve(f)};
}

}  // namespace

ScanResult gradient_integrability_scan(double s, const std::string& f_spec, const std::vector<double>& a_values,
                                       const std::vector<std::size_t>& refinements, double w_exp,
                                       const ScanOptions& options) {
    require_ascending(a_values, "a_values");
    for (double a : a_values) {
        if (!(a > 0.0)) throw InvalidArgument("gradient_integrability_scan: exponents must be positive");
    }
    ScanResult scan;
    scan.kind = "grad-integrability";
    scan.sweep_name = "a";
    scan.level_name = "n";
    scan.parameter_grid = a_values;
    scan.levels = as_levels(refinements);
    scan.exponents = critical_exponents(1, s);
    scan.predicted_threshold = w_exp == 0.0 ? scan.exponents.grad_blowup : std::numeric_limits<double>::infinity();
    scan.observable.assign(a_values.size(), std::vector<double>(refinements.size()));
    parallel_for(refinements.size(), options.threads, [&](std::size_t l) {
        const LevelSolve sol = linear_solve(s, refinements[l], f_spec);
        for (std::size_t j = 0; j < a_values.size(); ++j) {
            scan.observable[j][l] = grad_power_integral(sol.u, a_values[j], w_exp);
        }
    });
    scan.notes.push_back("observable: sum |Du|^a delta^(a*w_exp) h for A u = f, f = " + f_spec);
    finish_scan(scan, options.bands);
    return scan;
}

ScanResult sobolev_gain_scan(double s, double m, const std::vector<double>& q_values,
                             const std::vector<std::size_t>& refinements, const ScanOptions& options) {
    require_ascending(q_values, "q_values");
    for (double q : q_values) {
        if (!(q >= 1.0)) throw InvalidArgument("sobolev_gain_scan: q must be >= 1");
    }
    ScanResult scan;
    scan.kind = "sobolev-gain";
    scan.sweep_name = "q";
    scan.level_name = "n";
    scan.parameter_grid = q_values;
    scan.levels = as_levels(refinements);
    scan.exponents = critical_exponents(1, s, m);
    scan.predicted_threshold = scan.exponents.sobolev_gain;
    const double t = -1.0 / m + 0.01;
    const std::string f_spec = "delta-power:" + std::to_string(t);
    scan.observable.assign(q_values.size(), std::vector<double>(refinements.size()));
    parallel_for(refinements.size(), options.threads, [&](std::size_t l) {
        const LevelSolve sol = linear_solve(s, refinements[l], f_spec);
        for (std::size_t j = 0; j < q_values.size(); ++j) {
            scan.observable[j][l] = weighted_grad_norm(sol.u, q_values[j], 1.0 - s);
        }
    });
    if (std::isinf(scan.predicted_threshold)) {
        scan.notes.push_back("m >= N/(2s-1): predicted threshold is +inf, every q should converge");
    }
    scan.notes.push_back("observable: || |Du| delta^(1-s) ||_q for A u = " + f_spec);
    finish_scan(scan, options.bands);
    return scan;
}

ScanResult dirac_blowup_scan(double s, const std::vector<double>& p_values, const std::vector<double>& eps_values,
                             std::size_t n_grid, double mass, const ScanOptions& options) {
    require_ascending(p_values, "p_values");
    if (eps_values.size() < 2) throw InvalidArgument("dirac_blowup_scan: need at least two widths");
    for (std::size_t j = 0; j < eps_values.size(); ++j) {
        if (!(eps_values[j] > 0.0 && eps_values[j] < 1.0)) throw InvalidArgument("dirac_blowup_scan: widths must lie in (0, 1)");
        if (j > 0 && !(eps_values[j] < eps_values[j - 1])) {
            throw InvalidArgument("dirac_blowup_scan: widths must be strictly decreasing");
        }
    }
    ScanResult scan;
    scan.kind = "dirac";
    scan.sweep_name = "p";
    scan.level_name = "1/eps";
    scan.parameter_grid = p_values;
    for (double e : eps_values) scan.levels.push_back(1.0 / e);
    scan.exponents = critical_exponents(1, s);
    scan.predicted_threshold = scan.exponents.p_star;

    const GridPtr grid = build_grid(n_grid);
    const FactoredOp op(assemble(grid, s));
    scan.observable.assign(p_values.size(), std::vector<double>(eps_values.size()));
    parallel_for(eps_values.size(), options.threads, [&](std::size_t l) {
        std::string spec = "bump:0," + std::to_string(eps_values[l]) + "," + std::to_string(mass);
        const ScalarField u = op.solve(realize(spec, grid));
        for (std::size_t j = 0; j < p_values.size(); ++j) {
            scan.observable[j][l] = weighted_grad_norm(u, p_values[j]);
        }
    });
    for (std::size_t j = 0; j < p_values.size(); ++j) {
        scan.fit_exponent.push_back(log_log_slope(scan.levels, scan.observable[j]));
    }
    scan.notes.push_back("surrogate: gradient norms of the linear problem A u = f_eps (p_* >= 2s in N = 1)");
    finish_scan(scan, options.bands);
    return scan;
}

std::string nonexistence_label(const ExponentSet& e, double p) {
    if (p > e.nonexist_threshold) return "theorem regime";
    if (p > e.grad_blowup) return "conjecture regime";
    return "existence regime";
}

NonexistenceScan nonexistence_scan(double s, const std::vector<double>& p_values,
                                   const std::vector<std::size_t>& refinements, const ScanOptions& options) {
    require_ascending(p_values, "p_values");
    NonexistenceScan out;
    ScanResult& scan = out.scan;
    scan.kind = "nonexist";
    scan.sweep_name = "p";
    scan.level_name = "n";
    scan.parameter_grid = p_values;
    scan.levels = as_levels(refinements);
    scan.exponents = critical_exponents(1, s);
    scan.predicted_threshold = 1.0 / (1.0 - s);
    scan.observable.assign(p_values.size(), std::vector<double>(refinements.size()));
    out.auxiliary.assign(p_values.size(), std::vector<double>(refinements.size()));
    parallel_for(refinements.size(), options.threads, [&](std::size_t l) {
        const LevelSolve sol = linear_solve(s, refinements[l], "const:1");
        for (std::size_t j = 0; j < p_values.size(); ++j) {
            scan.observable[j][l] = delta_power_integral(*sol.grid, -p_values[j] * (1.0 - s));
            out.auxiliary[j][l] = weighted_grad_norm(sol.u, std::max(1.0, p_values[j]));
        }
    });
    for (double p : p_values) scan.labels.push_back(nonexistence_label(scan.exponents, p));
    scan.notes.push_back("observable: sum delta^(-p(1-s)) h; diverges iff p(1-s) >= 1");
    finish_scan(scan, options.bands);
    for (std::size_t j = 0; j < p_values.size(); ++j) {
        const auto& v = scan.verdicts[j];
        // Rate of the integral itself: log-type divergence shows a flat
        // increment exponent and ~0 power-law slope.
        scan.fit_exponent[j] = v.log_type ? 0.0 : log_log_slope(scan.levels, scan.observable[j]);
    }
    return out;
}

HardyScan hardy_scan(double p, const std::vector<double>& t_values, const std::vector<std::size_t>& refinements) {
    require_ascending(t_values, "t_values");
    HardyScan out;
    ScanResult& scan = out.scan;
    scan.kind = "hardy";
    scan.sweep_name = "t";
    scan.level_name = "n";
    scan.parameter_grid = t_values;
    scan.levels = as_levels(refinements);
    scan.predicted_threshold = 1.0 - 1.0 / p;
    scan.observable.assign(t_values.size(), std::vector<double>(refinements.size()));
    out.numerators = scan.observable;
    for (std::size_t l = 0; l < refinements.size(); ++l) {
        const GridPtr grid = build_grid(refinements[l]);
        for (std::size_t j = 0; j < t_values.size(); ++j) {
            const double t = t_values[j];
            const HardyRatio r = hardy_ratio(sample(grid, [t](double x) { return std::pow(1.0 - x * x, t); }), p);
            scan.observable[j][l] = r.ratio;
            out.numerators[j][l] = r.numerator;
        }
    }
    for (std::size_t j = 0; j < t_values.size(); ++j) {
        scan.verdicts.push_back(classify_refinement(scan.levels, out.numerators[j]));
        out.non_hardy.push_back(scan.verdicts.back().verdict == Verdict::Diverging);
        scan.labels.push_back(out.non_hardy.back() ? "non-Hardy" : "");
    }
    scan.fit_exponent.assign(t_values.size(), kNaN);
    // Orientation is reversed here: small t diverges, large t converges.
    scan.empirical_threshold = kNaN;
    bool seen_converging = false;
    for (std::size_t j = 0; j < t_values.size(); ++j) {
        const Verdict v = scan.verdicts[j].verdict;
        if (v == Verdict::Diverging && seen_converging) scan.monotone_verdicts = false;
        if (v == Verdict::Converging && !seen_converging) {
            seen_converging = true;
            if (j > 0 && scan.verdicts[j - 1].verdict == Verdict::Diverging) {
                scan.empirical_threshold = 0.5 * (t_values[j - 1] + t_values[j]);
            }
        }
    }
    scan.notes.push_back("verdicts describe the numerator sum |phi|^p / delta^p h");
    return out;
}

ViscosityReport viscosity_residual_check(const FracOp& op, const ScalarField& u, std::optional<double> p,
                                         const ScalarField& f, const ViscosityOptions& options) {
    if (u.size() != op.size() || f.size() != op.size()) {
        throw InvalidArgument("viscosity_residual_check: fields and operator differ in size");
    }
    if (options.eps_multiples.size() != 2 || !(options.eps_multiples[1] > options.eps_multiples[0]) ||
        !(options.eps_multiples[0] > 0.0)) {
        throw InvalidArgument("viscosity_residual_check: need two increasing positive cutoff multiples");
    }
    const Grid& grid = *op.grid();
    const double h = grid.h();
    const double beta = 2.0 - 2.0 * op.s();
    const double e1 = options.eps_multiples[0] * h;
    const double e2 = options.eps_multiples[1] * h;
    // V(ε) ≈ V₀ + C ε^β.
    const double w1 = std::pow(e1, beta);
    const double w2 = std::pow(e2, beta);

    ViscosityReport report;
    report.eps_values = {e1, e2};
    report.residuals.assign(grid.size(), kNaN);
    const ScalarField du = gradient(u);
    double touching_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.delta(i) < options.boundary_layer * h - 1e-12) continue;
        const double v1 = apply_regularized(op, u, i, e1);
        const double v2 = apply_regularized(op, u, i, e2);
        const double v0 = (v1 * w2 - v2 * w1) / (w2 - w1);
        const double grad_term = p ? std::pow(std::abs(du[i]), *p) : 0.0;
        const double r = v0 + grad_term - f[i];
        report.residuals[i] = r;
        if (std::abs(r) > report.sup_residual) {
            report.sup_residual = std::abs(r);
            report.worst_node = i;
        }
        if (std::abs(grid.node(i)) <= options.interior_radius + 1e-12) {
            report.interior_residual = std::max(report.interior_residual, std::abs(r));
        }
        if (options.touching && i >= 2 && i + 2 < grid.size()) {
            // Slope of the least-squares quadratic on five points; lowering
            // the curvature until the quadratic sits below u does not
            // change the slope at x_i.
            const double slope = (-2.0 * u[i - 2] - u[i - 1] + u[i + 1] + 2.0 * u[i + 2]) / (10.0 * h);
            const double tr = v0 + (p ? std::pow(std::abs(slope), *p) : 0.0) - f[i];
            touching_min = std::min(touching_min, tr);
        }
    }
    if (options.touching) report.touching_min = touching_min;
    return report;
}

}  // namespace fraclab
