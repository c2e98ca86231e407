#include "fraclab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "fraclab/errors.hpp"

namespace fraclab {

using nlohmann::json;

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

namespace {

json numbers(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json to_json(const ExponentSet& e) {
    return json{{"N", e.N},
                {"s", number(e.s)},
                {"m", number(e.m)},
                {"beta", number(e.beta)},
                {"p_star", number(e.p_star)},
                {"p_star_beta", number(e.p_star_beta)},
                {"sobolev_gain", number(e.sobolev_gain)},
                {"grad_blowup", number(e.grad_blowup)},
                {"p_upper", number(e.p_upper)},
                {"nonexist_threshold", number(e.nonexist_threshold)},
                {"natural_growth", number(e.natural_growth)}};
}

json to_json(const RefinementVerdict& v) {
    return json{{"verdict", to_string(v.verdict)},
                {"last_ratio", number(v.last_ratio)},
                {"increment_rate", number(v.increment_rate)},
                {"log_type", v.log_type},
                {"by_fallback", v.by_fallback},
                {"limit_estimate", number(v.limit_estimate)}};
}

json to_json(const ScalarField& u) {
    if (!u.grid()) return json::object();
    std::vector<double> values(u.values().begin(), u.values().end());
    return json{{"n", u.size()}, {"h", number(u.grid()->h())}, {"values", numbers(values)}};
}

json to_json(const SolveReport& r, bool with_history) {
    json out{{"scheme", to_string(r.scheme)},
             {"iterates_outer", r.iterates_outer},
             {"iterates_inner", r.iterates_inner},
             {"monotone_violation", number(r.monotone_violation)},
             {"k_violation", number(r.k_violation)},
             {"n_violation", number(r.n_violation)},
             {"ordering_flagged", r.ordering_flagged},
             {"converged", r.converged},
             {"reason", r.reason},
             {"tolerance", number(r.tolerance)},
             {"equation_residual", number(r.equation_residual)},
             {"final_sup_norm", number(r.final.grid() ? r.final.sup_norm() : 0.0)},
             {"last_residual", r.residual_history.empty() ? json(nullptr) : number(r.residual_history.back())}};
    if (!r.n_schedule.empty()) out["n_schedule"] = numbers(r.n_schedule);
    if (!r.mass_history.empty()) out["mass_history"] = numbers(r.mass_history);
    if (!std::isnan(r.admissibility)) out["admissibility"] = number(r.admissibility);
    if (r.scheme == Scheme::FixedPoint) {
        out["ball"] = json{{"threshold_2s", number(r.ball_threshold)},
                           {"threshold_p", number(r.ball_threshold_alt)},
                           {"binding", r.binding_threshold},
                           {"exited", r.ball_exited},
                           {"data_above_cap", r.data_above_cap}};
    }
    if (with_history) {
        out["residual_history"] = numbers(r.residual_history);
        out["norm_ledger"] = numbers(r.norm_ledger);
    }
    return out;
}

json to_json(const ScanResult& s) {
    json rows = json::array();
    for (std::size_t j = 0; j < s.parameter_grid.size(); ++j) {
        rows.push_back(json{{"value", number(s.parameter_grid[j])},
                            {"observable", numbers(s.observable[j])},
                            {"verdict", to_json(s.verdicts[j])},
                            {"fit_exponent", number(s.fit_exponent[j])},
                            {"label", s.labels[j]}});
    }
    return json{{"kind", s.kind},
                {"sweep_name", s.sweep_name},
                {"level_name", s.level_name},
                {"levels", numbers(s.levels)},
                {"sweep", rows},
                {"predicted_threshold", number(s.predicted_threshold)},
                {"empirical_threshold", number(s.empirical_threshold)},
                {"monotone_verdicts", s.monotone_verdicts},
                {"exponents", to_json(s.exponents)},
                {"notes", s.notes}};
}

json to_json(const ViscosityReport& v) {
    return json{{"eps_values", numbers(v.eps_values)},
                {"sup_residual", number(v.sup_residual)},
                {"interior_residual", number(v.interior_residual)},
                {"worst_node", v.worst_node},
                {"touching_min", number(v.touching_min)}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_history_csv(const std::filesystem::path& path, const SolveReport& r) {
    auto out = open_out(path);
    out << "iter,residual,ball_norm,violation\n";
    for (std::size_t j = 0; j < r.residual_history.size(); ++j) {
        const double ball = j < r.norm_ledger.size() ? r.norm_ledger[j] : 0.0;
        const double viol = j < r.violation_history.size() ? r.violation_history[j] : 0.0;
        out << j + 1 << ',' << format_double(r.residual_history[j]) << ',' << format_double(ball) << ','
            << format_double(viol) << '\n';
    }
}

void write_scan_csv(const std::filesystem::path& path, const ScanResult& s) {
    auto out = open_out(path);
    out << "sweep_value,refinement,observable,verdict\n";
    for (std::size_t j = 0; j < s.parameter_grid.size(); ++j) {
        for (std::size_t l = 0; l < s.levels.size(); ++l) {
            out << format_double(s.parameter_grid[j]) << ',' << format_double(s.levels[l]) << ','
                << format_double(s.observable[j][l]) << ',' << to_string(s.verdicts[j].verdict) << '\n';
        }
    }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& u) {
    auto out = open_out(path);
    out << "x,delta,u\n";
    const Grid& g = *u.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        out << format_double(g.node(i)) << ',' << format_double(g.delta(i)) << ',' << format_double(u[i]) << '\n';
    }
}

}  // namespace fraclab
