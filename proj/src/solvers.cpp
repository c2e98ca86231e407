#include "fraclab/solvers.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/exponents.hpp"
#include "fraclab/gradient.hpp"
#include "fraclab/norms.hpp"

namespace fraclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Optional reaction term λ g u⁺ / (1 + u⁺/n) on the data side.
struct Reaction {
    const ScalarField* g = nullptr;
    double lambda = 0.0;
    bool saturate_absorption = true;
};

struct PicardResult {
    ScalarField u;
    std::vector<double> residuals;
    std::vector<double> norms;
    bool converged = false;
};

ScalarField absorption(const ScalarField& u, double p, double n_reg) {
    ScalarField du = gradient(u);
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = saturated_power(std::abs(du[i]), p, n_reg);
    return du;
}

void add_reaction(ScalarField& rhs, const ScalarField& u, const Reaction& reaction, double n_reg) {
    if (reaction.g == nullptr || reaction.lambda == 0.0) return;
    const ScalarField& g = *reaction.g;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double up = std::max(u[i], 0.0);
        rhs[i] += reaction.lambda * g[i] * up / (1.0 + up / n_reg);
    }
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
    return out;
}

PicardResult picard(const FactoredOp& op, const ScalarField& data, double p, double n_reg, const Reaction& reaction,
                    const DampingPolicy& damping, double tol, std::size_t max_iter, ScalarField u) {
    const double n_abs = reaction.saturate_absorption ? n_reg : kInf;
    PicardResult out;
    double theta = damping.theta;
    int halvings = 0;
    double previous = kInf;
    for (std::size_t it = 0; it < max_iter; ++it) {
        ScalarField rhs = data;
        rhs -= absorption(u, p, n_abs);
        add_reaction(rhs, u, reaction, n_reg);
        ScalarField tu = op.solve(rhs);
        if (!tu.all_finite()) throw NumericalFailure("Picard iteration produced a non-finite iterate");
        const double res = sup_diff(tu, u);
        out.residuals.push_back(res);
        out.norms.push_back(weighted_grad_norm(tu, std::max(1.0, p)));
        if (res <= tol) {
            out.u = std::move(tu);
            out.converged = true;
            return out;
        }
        if (res > previous && halvings < damping.max_halvings) {
            theta *= 0.5;
            ++halvings;
        }
        previous = res;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = (1.0 - theta) * u[i] + theta * tu[i];
    }
    out.u = std::move(u);
    return out;
}

/// F(u) = A u + g_n((|Du|² + μ²)^{1/2}) - λ g u⁺/(1 + u⁺/n_r) - data.
struct NewtonSystem {
    ScalarField data;
    double p = 1.0;
    double n_abs = kInf;
    double mu = 1e-8;
    Reaction reaction{};
    double n_reaction = kInf;
};

struct NewtonResult {
    ScalarField u;
    std::vector<double> residuals;
    std::vector<double> norms;
    std::size_t steps = 0;
    bool converged = false;
    bool stagnated = false;
};

ScalarField newton_residual(const FracOp& a, const NewtonSystem& sys, const ScalarField& u) {
    ScalarField r = a.apply(u);
    const ScalarField du = gradient(u);
    const double mu2 = sys.mu * sys.mu;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double phi = std::pow(du[i] * du[i] + mu2, 0.5 * sys.p);
        r[i] += std::isinf(sys.n_abs) ? phi : phi / (1.0 + phi / sys.n_abs);
        r[i] -= sys.data[i];
    }
    if (sys.reaction.g != nullptr && sys.reaction.lambda != 0.0) {
        const ScalarField& g = *sys.reaction.g;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double up = std::max(u[i], 0.0);
            r[i] -= sys.reaction.lambda * g[i] * up / (1.0 + up / sys.n_reaction);
        }
    }
    return r;
}

/// Damped Newton with backtracking on the merit `measure(F)`; `done(F, merit)`
/// decides convergence.
template <class Done, class Measure>
NewtonResult newton_core(const FactoredOp& op, const NewtonSystem& sys, ScalarField u, std::size_t max_iter,
                         Done&& done, Measure&& measure) {
    const FracOp& a = op.op();
    const auto n = static_cast<Eigen::Index>(a.size());
    const double h = a.grid()->h();
    const double p = sys.p;
    const double mu2 = sys.mu * sys.mu;
    NewtonResult out;
    ScalarField r = newton_residual(a, sys, u);
    double merit = measure(r);
    for (std::size_t it = 0;; ++it) {
        if (!std::isfinite(merit)) throw NumericalFailure("Newton iteration produced a non-finite residual");
        out.residuals.push_back(merit);
        out.norms.push_back(weighted_grad_norm(u, std::max(1.0, p)));
        if (done(r, merit)) {
            out.converged = true;
            break;
        }
        if (it == max_iter) break;
        const ScalarField du = gradient(u);
        Eigen::MatrixXd jac = a.matrix();
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double v = du[ii];
            const double base = v * v + mu2;
            const double phi = std::pow(base, 0.5 * p);
            double c = p * v * std::pow(base, 0.5 * p - 1.0);
            if (!std::isinf(sys.n_abs)) c /= (1.0 + phi / sys.n_abs) * (1.0 + phi / sys.n_abs);
            if (i == 0) {
                jac(i, i) += c / h;
            } else if (i == n - 1) {
                jac(i, i) -= c / h;
            } else {
                jac(i, i + 1) += c / (2.0 * h);
                jac(i, i - 1) -= c / (2.0 * h);
            }
            if (sys.reaction.g != nullptr && sys.reaction.lambda != 0.0 && u[ii] >= 0.0) {
                const double q = 1.0 + u[ii] / sys.n_reaction;
                jac(i, i) -= sys.reaction.lambda * (*sys.reaction.g)[ii] / (q * q);
            }
        }
        Eigen::Map<const Eigen::VectorXd> rv(r.values().data(), n);
        const Eigen::VectorXd step = jac.partialPivLu().solve(-rv);
        if (!step.allFinite()) throw NumericalFailure("Newton iteration: singular Jacobian");
        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-6) {
            ScalarField trial = u;
            for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] += t * step(i);
            ScalarField tr = newton_residual(a, sys, trial);
            const double tm = measure(tr);
            if (tm < (1.0 - 1e-4 * t) * merit) {
                u = std::move(trial);
                r = std::move(tr);
                merit = tm;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++out.steps;
        if (!accepted) {
            out.stagnated = true;
            break;
        }
    }
    out.u = std::move(u);
    return out;
}

void require_damping(const DampingPolicy& d) {
    if (!(d.theta > 0.0 && d.theta <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (d.max_halvings < 0) throw InvalidArgument("damping halvings must be non-negative");
}

void require_nonnegative(const ScalarField& f, const char* what) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= 0.0)) throw InvalidArgument(std::string(what) + " must be non-negative and finite");
    }
}

void require_same_grid(const FactoredOp& op, const ScalarField& f) {
    if (f.size() != op.op().size()) throw InvalidArgument("field and operator live on different grids");
}

SolveReport monotone_scheme(const FactoredOp& op, const ScalarField& f, const MonotoneParams& params,
                            const Reaction& reaction, Scheme scheme) {
    const double s = op.op().s();
    if (!(params.p > 1.0 && params.p < 2.0 * s)) {
        std::ostringstream msg;
        msg << "monotone scheme requires 1 < p < 2s = " << 2.0 * s << ", got p = " << params.p;
        throw InvalidArgument(msg.str());
    }
    require_same_grid(op, f);
    require_nonnegative(f, "data f");
    require_damping(params.damping);
    if (params.n_sequence.empty() || params.k_max == 0) throw InvalidArgument("empty n or k schedule");
    for (std::size_t j = 0; j < params.n_sequence.size(); ++j) {
        if (!(params.n_sequence[j] >= 1.0) || (j > 0 && !(params.n_sequence[j] > params.n_sequence[j - 1]))) {
            throw InvalidArgument("n_sequence must be increasing and >= 1");
        }
    }

    SolveReport report;
    report.scheme = scheme;
    report.tolerance = params.tol_inner;
    // Saturating the absorption lowers u_n as n grows; saturating only the
    // reaction raises it.
    const bool increasing_in_n = !reaction.saturate_absorption;
    const GridPtr& grid = op.grid();
    ScalarField u(grid);
    std::optional<ScalarField> previous_n;
    ScalarField second_last;
    bool all_converged = true;
    bool k_stagnated = true;

    for (double n_reg : params.n_sequence) {
        std::optional<ScalarField> previous_k;
        bool stagnated = false;
        for (std::size_t k = 1; k <= params.k_max; ++k) {
            const ScalarField data = truncate(f, static_cast<double>(k));
            PicardResult r;
            if (reaction.saturate_absorption) {
                r = picard(op, data, params.p, n_reg, reaction, params.damping, params.tol_inner, params.max_iter, u);
            } else {
                // Plain |Du|^p makes Picard non-contractive; solve the (n, k)
                // problem by Newton, measuring the residual as ‖A⁻¹F(u)‖∞.
                // Newton is started from the saturated-absorption solution,
                // which is positive and bounded.
                if (u.sup_norm() == 0.0) {
                    Reaction saturated = reaction;
                    saturated.saturate_absorption = true;
                    u = picard(op, data, params.p, n_reg, saturated, params.damping, params.tol_outer,
                               params.max_iter, u).u;
                }
                NewtonSystem sys{data, params.p, kInf, 1e-8, reaction, n_reg};
                const double tol = params.tol_inner;
                NewtonResult nr = newton_core(
                    op, sys, u, params.max_iter, [tol](const ScalarField&, double merit) { return merit <= tol; },
                    [&op](const ScalarField& res) { return op.solve(res).sup_norm(); });
                r.u = std::move(nr.u);
                r.residuals = std::move(nr.residuals);
                r.norms = std::move(nr.norms);
                r.converged = nr.converged;
            }
            all_converged = all_converged && r.converged;
            report.iterates_inner += r.residuals.size();
            report.residual_history.insert(report.residual_history.end(), r.residuals.begin(), r.residuals.end());
            report.norm_ledger.insert(report.norm_ledger.end(), r.norms.begin(), r.norms.end());
            report.violation_history.insert(report.violation_history.end(), r.residuals.size(), 0.0);
            u = std::move(r.u);
            if (previous_k) {
                const double violation = max_excess(*previous_k, u);
                report.k_violation = std::max(report.k_violation, violation);
                report.violation_history.back() = violation;
                if (sup_diff(u, *previous_k) <= params.tol_outer * std::max(1.0, u.sup_norm())) {
                    stagnated = true;
                    break;
                }
            }
            previous_k = u;
        }
        k_stagnated = k_stagnated && stagnated;
        ++report.iterates_outer;
        report.n_schedule.push_back(n_reg);
        if (reaction.g != nullptr) {
            ScalarField gu = *reaction.g;
            for (std::size_t i = 0; i < gu.size(); ++i) gu[i] *= u[i];
            report.mass_history.push_back(integral(gu));
        }
        if (previous_n) {
            const double violation = increasing_in_n ? max_excess(*previous_n, u) : max_excess(u, *previous_n);
            report.n_violation = std::max(report.n_violation, violation);
            report.violation_history.back() = std::max(report.violation_history.back(), violation);
            second_last = *previous_n;
            if (sup_diff(u, *previous_n) <= params.tol_outer * std::max(1.0, u.sup_norm())) {
                previous_n = u;
                break;
            }
        }
        previous_n = u;
    }

    report.last_iterate = u;
    const std::size_t used = report.n_schedule.size();
    if (used >= 2 && report.n_schedule[used - 1] == 2.0 * report.n_schedule[used - 2]) {
        report.final = 2.0 * u - second_last;
    } else {
        report.final = u;
    }
    report.monotone_violation = std::max({0.0, report.k_violation, report.n_violation});
    report.ordering_flagged = report.monotone_violation > 10.0 * params.tol_mono * std::max(u.sup_norm(), 1e-300);
    report.converged = all_converged && k_stagnated;
    report.reason = report.converged ? "converged" : (all_converged ? "stagnated" : "max-iter");
    ScalarField data = f;
    add_reaction(data, report.final, reaction, kInf);
    report.equation_residual = equation_residual(op.op(), report.final, data, params.p);
    return report;
}

}  // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Linear: return "linear";
        case Scheme::Regularized: return "regularized";
        case Scheme::Monotone: return "monotone";
        case Scheme::FixedPoint: return "fixed-point";
        case Scheme::Reaction: return "reaction";
        case Scheme::Newton: return "newton";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& tag) {
    for (Scheme s : {Scheme::Linear, Scheme::Regularized, Scheme::Monotone, Scheme::FixedPoint, Scheme::Reaction,
                     Scheme::Newton}) {
        if (to_string(s) == tag) return s;
    }
    throw InvalidArgument("unknown scheme '" + tag + "' (linear, regularized, monotone, fixed-point, reaction, newton)");
}

double saturated_power(double t, double p, double n_reg) {
    const double tp = std::pow(t, p);
    if (std::isinf(n_reg)) return tp;
    return tp / (1.0 + tp / n_reg);
}

ScalarField solve_linear(const FactoredOp& op, const ScalarField& f) {
    require_same_grid(op, f);
    if (!f.all_finite()) throw InvalidArgument("solve_linear: non-finite data");
    return op.solve(f);
}

ScalarField solve_linear(const FracOp& op, const ScalarField& f) {
    return solve_linear(FactoredOp(op), f);
}

double equation_residual(const FracOp& op, const ScalarField& u, const ScalarField& f, double p, double n_reg) {
    ScalarField r = op.apply(u);
    r += absorption(u, p, n_reg);
    r -= f;
    return r.sup_norm();
}

SolveReport solve_regularized(const FactoredOp& op, const ScalarField& f, const RegularizedParams& params,
                              const std::optional<ScalarField>& initial) {
    if (!(params.p >= 1.0)) throw InvalidArgument("solve_regularized: p must be >= 1");
    if (!(params.n_reg >= 1.0)) throw InvalidArgument("solve_regularized: n_reg must be >= 1");
    if (!(params.k_trunc > 0.0)) throw InvalidArgument("solve_regularized: k_trunc must be positive");
    require_damping(params.damping);
    require_same_grid(op, f);
    if (!f.all_finite()) throw InvalidArgument("solve_regularized: non-finite data");

    const ScalarField data = truncate(f, params.k_trunc);
    PicardResult r = picard(op, data, params.p, params.n_reg, {}, params.damping, params.tol, params.max_iter,
                            initial ? *initial : ScalarField(op.grid()));
    SolveReport report;
    report.scheme = Scheme::Regularized;
    report.iterates_outer = 1;
    report.iterates_inner = r.residuals.size();
    report.residual_history = std::move(r.residuals);
    report.norm_ledger = std::move(r.norms);
    report.violation_history.assign(report.residual_history.size(), 0.0);
    report.converged = r.converged;
    report.reason = r.converged ? "converged" : "max-iter";
    report.tolerance = params.tol;
    report.equation_residual = equation_residual(op.op(), r.u, data, params.p, params.n_reg);
    report.final = r.u;
    report.last_iterate = std::move(r.u);
    return report;
}

SolveReport solve_monotone(const FactoredOp& op, const ScalarField& f, const MonotoneParams& params) {
    return monotone_scheme(op, f, params, {}, Scheme::Monotone);
}

SolveReport solve_reaction(const FactoredOp& op, const ScalarField& f, const ScalarField& g, double lambda,
                           const ReactionParams& params) {
    require_same_grid(op, g);
    require_nonnegative(g, "weight g");
    if (!(lambda >= 0.0)) throw InvalidArgument("solve_reaction: lambda must be non-negative");
    const double certificate = check_admissible(g, params.p);
    if (!(certificate > 0.0)) throw DegenerateInput("solve_reaction: weight g is not admissible");
    SolveReport report = monotone_scheme(op, f, params, Reaction{&g, lambda, params.saturate_absorption}, Scheme::Reaction);
    report.admissibility = certificate;
    return report;
}

SolveReport solve_fixed_point(const FactoredOp& op, const ScalarField& f, const FixedPointConfig& cfg) {
    const double s = op.op().s();
    const double p = cfg.p;
    if (!(p >= 2.0 * s && p < s / (1.0 - s))) {
        std::ostringstream msg;
        msg << "solve_fixed_point: p = " << p << " outside [2s, s/(1-s)) = [" << 2.0 * s << ", " << s / (1.0 - s) << ")";
        throw InvalidArgument(msg.str());
    }
    const double p_conj = p / (p - 1.0);
    if (!(cfg.m > 1.0 / (p_conj * (2.0 * s - 1.0)))) {
        throw InvalidArgument("solve_fixed_point: m must exceed N/(p'(2s-1))");
    }
    if (!(cfg.l > 0.0)) throw InvalidArgument("solve_fixed_point: l must be positive");
    if (!(cfg.tol > 0.0)) throw InvalidArgument("solve_fixed_point: tol must be positive");
    require_same_grid(op, f);
    if (!f.all_finite()) throw InvalidArgument("solve_fixed_point: non-finite data");

    SolveReport report;
    report.scheme = Scheme::FixedPoint;
    report.tolerance = cfg.tol;
    report.ball_threshold = std::pow(cfg.l, 1.0 / (2.0 * s));
    report.ball_threshold_alt = std::pow(cfg.l, 1.0 / p);
    report.binding_threshold = report.ball_threshold < report.ball_threshold_alt   ? "l^(1/(2s))"
                               : report.ball_threshold > report.ball_threshold_alt ? "l^(1/p)"
                                                                                   : "equal";
    report.data_above_cap = lp_norm(f, cfg.m) > cfg.lambda_cap;
    report.reason = "max-iter";

    ScalarField v(op.grid());
    for (std::size_t j = 0; j < cfg.max_iter; ++j) {
        ScalarField rhs = f;
        rhs -= absorption(v, p, kInf);
        ScalarField next = op.solve(rhs);
        ++report.iterates_inner;
        if (!next.all_finite() || next.sup_norm() > 1e12) {
            report.reason = "blowup";
            break;
        }
        const double ball = weighted_grad_norm(next, p * cfg.m, 1.0 - s);
        const double res = sup_diff(next, v);
        report.residual_history.push_back(res);
        report.norm_ledger.push_back(ball);
        report.violation_history.push_back(0.0);
        v = std::move(next);
        if (ball > report.ball_threshold) report.ball_exited = true;
        if (ball > 10.0 * report.ball_threshold) {
            report.reason = "ball-exit";
            break;
        }
        if (res <= cfg.tol) {
            report.reason = report.ball_exited ? "ball-exit" : "converged";
            report.converged = !report.ball_exited;
            break;
        }
    }
    if (report.reason == "max-iter" && report.ball_exited) report.reason = "ball-exit";
    report.iterates_outer = 1;
    report.equation_residual = equation_residual(op.op(), v, f, p);
    report.final = v;
    report.last_iterate = std::move(v);
    return report;
}

ThresholdSearch fixed_point_threshold(const FactoredOp& op, const ScalarField& shape, const FixedPointConfig& cfg,
                                      double c_hi, double rel_tol) {
    if (!(c_hi > 0.0) || !(rel_tol > 0.0)) throw InvalidArgument("fixed_point_threshold: bad bracket");
    ThresholdSearch out;
    auto succeeds = [&](double c) {
        ++out.evaluations;
        const SolveReport r = solve_fixed_point(op, c * shape, cfg);
        if (!r.converged) out.failure_reason = r.reason;
        return r.converged;
    };
    double lo = 0.0;
    double hi = c_hi;
    while (succeeds(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericalFailure("fixed_point_threshold: no failure found");
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (succeeds(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.c_converged = lo;
    out.c_failed = hi;
    out.c_star = 0.5 * (lo + hi);
    return out;
}

std::vector<ScalarField> standard_trial_family(const GridPtr& grid, std::uint64_t seed, std::size_t random_members) {
    std::vector<ScalarField> family;
    for (double t : {0.6, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0}) {
        family.push_back(sample(grid, [t](double x) { return std::pow(1.0 - x * x, t); }));
    }
    auto bump = [](double x, double c, double w) {
        const double tau = (x - c) / w;
        return std::abs(tau) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - tau * tau)) : 0.0;
    };
    for (double w : {0.2, 0.4}) {
        for (double c : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
            family.push_back(sample(grid, [&](double x) { return bump(x, c, w); }));
        }
    }
    family.push_back(sample(grid, [&](double x) { return bump(x, 0.0, 0.9); }));
    for (int k = 1; k <= 8; ++k) {
        family.push_back(sample(grid, [k](double x) { return std::sin(k * std::numbers::pi * (x + 1.0) / 2.0); }));
    }
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
    for (std::size_t r = 0; r < random_members; ++r) {
        std::vector<double> coeff(6);
        for (auto& c : coeff) c = unit();
        family.push_back(sample(grid, [&](double x) {
            double v = 0.0;
            for (std::size_t k = 1; k <= coeff.size(); ++k) {
                const auto kk = static_cast<double>(k);
                v += coeff[k - 1] * std::sin(kk * std::numbers::pi * (x + 1.0) / 2.0) / (kk * kk);
            }
            return v;
        }));
    }
    return family;
}

double check_admissible(const ScalarField& g, double p, const std::vector<ScalarField>& trial_family) {
    require_nonnegative(g, "weight g");
    double best = kInf;
    for (const ScalarField& phi : trial_family) {
        if (phi.size() != g.size()) throw InvalidArgument("check_admissible: trial field on a different grid");
        double mass = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) mass += g[i] * std::abs(phi[i]);
        mass *= g.grid()->h();
        if (mass == 0.0) continue;
        best = std::min(best, weighted_grad_norm(phi, p) / mass);
    }
    if (std::isinf(best)) throw DegenerateInput("check_admissible: weight vanishes on every trial field");
    return best;
}

double check_admissible(const ScalarField& g, double p) {
    return check_admissible(g, p, standard_trial_family(g.grid()));
}

SolveReport solve_newton(const FactoredOp& op, const ScalarField& f, const NewtonParams& params) {
    if (!(params.p >= 1.0)) throw InvalidArgument("solve_newton: p must be >= 1");
    if (!(params.mu > 0.0)) throw InvalidArgument("solve_newton: mu must be positive");
    require_same_grid(op, f);
    if (!f.all_finite()) throw InvalidArgument("solve_newton: non-finite data");

    NewtonSystem system{f, params.p, params.n_reg, params.mu, {}};
    const double target = params.tol * std::max(1.0, f.sup_norm());
    NewtonResult r = newton_core(op, system, op.solve(f), params.max_iter,
                                 [target](const ScalarField& res, double) { return res.sup_norm() <= target; },
                                 [](const ScalarField& res) { return res.sup_norm(); });
    SolveReport report;
    report.scheme = Scheme::Newton;
    report.tolerance = target;
    report.iterates_outer = 1;
    report.iterates_inner = r.steps;
    report.residual_history = std::move(r.residuals);
    report.norm_ledger = std::move(r.norms);
    report.violation_history.assign(report.residual_history.size(), 0.0);
    report.converged = r.converged;
    report.reason = r.converged ? "converged" : (r.stagnated ? "stagnated" : "max-iter");
    report.equation_residual = equation_residual(op.op(), r.u, f, params.p, params.n_reg);
    report.final = r.u;
    report.last_iterate = std::move(r.u);
    return report;
}

}  // namespace fraclab
