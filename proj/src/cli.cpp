#include "fraclab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fraclab/data_spec.hpp"
#include "fraclab/diagnostics.hpp"
#include "fraclab/exponents.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/report_io.hpp"
#include "fraclab/solvers.hpp"

#ifndef FRACLAB_VERSION
#define FRACLAB_VERSION "0.0.0"
#endif

namespace fraclab {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size() || std::isnan(out)) {
        throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
    }
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("'" + key + "': cannot parse '" + text + "' as a non-negative integer");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError("'" + key + "': empty list");
    return out;
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) out.push_back(static_cast<std::size_t>(to_unsigned(key, item)));
    if (out.empty()) throw ConfigError("'" + key + "': empty list");
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"s", [](auto& c, auto& k, auto& v) { c.s = to_double(k, v); }},
        {"p", [](auto& c, auto& k, auto& v) { c.p = to_double(k, v); }},
        {"m", [](auto& c, auto& k, auto& v) { c.m = to_double(k, v); }},
        {"lambda", [](auto& c, auto& k, auto& v) { c.lambda = to_double(k, v); }},
        {"beta", [](auto& c, auto& k, auto& v) { c.beta = to_double(k, v); }},
        {"l", [](auto& c, auto& k, auto& v) { c.l = to_double(k, v); }},
        {"n_grid", [](auto& c, auto& k, auto& v) { c.n_grid = static_cast<std::size_t>(to_unsigned(k, v)); }},
        {"refinements", [](auto& c, auto& k, auto& v) { c.refinements = to_sizes(k, v); }},
        {"values", [](auto& c, auto& k, auto& v) { c.values = to_doubles(k, v); }},
        {"eps", [](auto& c, auto& k, auto& v) { c.eps = to_doubles(k, v); }},
        {"n_sequence", [](auto& c, auto& k, auto& v) { c.n_sequence = to_doubles(k, v); }},
        {"f", [](auto& c, auto&, auto& v) { c.f_spec = trim(v); }},
        {"g", [](auto& c, auto&, auto& v) { c.g_spec = trim(v); }},
        {"f1", [](auto& c, auto&, auto& v) { c.f1_spec = trim(v); }},
        {"f2", [](auto& c, auto&, auto& v) { c.f2_spec = trim(v); }},
        {"scheme", [](auto& c, auto&, auto& v) { c.scheme = trim(v); }},
        {"kind", [](auto& c, auto&, auto& v) { c.kind = trim(v); }},
        {"tol", [](auto& c, auto& k, auto& v) { c.tol = to_double(k, v); }},
        {"max_iter", [](auto& c, auto& k, auto& v) { c.max_iter = static_cast<std::size_t>(to_unsigned(k, v)); }},
        {"damping", [](auto& c, auto& k, auto& v) { c.damping = to_double(k, v); }},
        {"n_reg", [](auto& c, auto& k, auto& v) { c.n_reg = to_double(k, v); }},
        {"k_trunc", [](auto& c, auto& k, auto& v) { c.k_trunc = to_double(k, v); }},
        {"mass", [](auto& c, auto& k, auto& v) { c.mass = to_double(k, v); }},
        {"w_exp", [](auto& c, auto& k, auto& v) { c.w_exp = to_double(k, v); }},
        {"saturate_absorption", [](auto& c, auto& k, auto& v) { c.saturate_absorption = to_bool(k, v); }},
        {"dump_operator", [](auto& c, auto& k, auto& v) { c.dump_operator = to_bool(k, v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = to_unsigned(k, v); }},
        {"threads", [](auto& c, auto& k, auto& v) { c.threads = static_cast<unsigned>(to_unsigned(k, v)); }},
        {"out_dir", [](auto& c, auto&, auto& v) { c.out_dir = trim(v); }},
    };
    return table;
}

const std::vector<std::string> kSubcommands{"solve", "scan", "validate-operator", "dirac", "nonexist", "compare"};

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

std::vector<double> default_values(const ExperimentConfig& cfg) {
    if (!cfg.values.empty()) return cfg.values;
    if (cfg.subcommand == "dirac") return {1.5, 3.0};
    if (cfg.subcommand == "nonexist") return {2.0, 4.0, 5.0};
    if (cfg.kind == "sobolev-gain") return {2.0, 4.0, 6.0, 8.0};
    if (cfg.kind == "hardy") return {0.3, 0.6, 0.8, 1.0};
    return {1.0, 2.0, 3.0, 3.5, 4.0, 4.5, 6.0};
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Output of one subcommand before it is written to disk.
struct RunOutput {
    json result = json::object();
    std::vector<std::string> summary;
    std::function<void(const std::filesystem::path&)> write_extra;
};

SolveReport linear_report(const FactoredOp& op, const ScalarField& f) {
    SolveReport r;
    r.scheme = Scheme::Linear;
    r.final = solve_linear(op, f);
    r.last_iterate = r.final;
    ScalarField res = op.op().apply(r.final);
    res -= f;
    r.equation_residual = res.sup_norm();
    r.residual_history.push_back(r.equation_residual);
    r.norm_ledger.push_back(weighted_grad_norm(r.final, 1.0));
    r.violation_history.push_back(0.0);
    r.iterates_outer = 1;
    r.iterates_inner = 1;
    r.tolerance = 1e-10 * std::max(f.sup_norm(), 1e-300);
    r.converged = r.equation_residual <= r.tolerance;
    r.reason = r.converged ? "converged" : "residual-above-tolerance";
    return r;
}

MonotoneParams monotone_params(const ExperimentConfig& cfg) {
    MonotoneParams mp;
    mp.p = cfg.p;
    mp.n_sequence = cfg.n_sequence;
    mp.tol_inner = cfg.tol;
    mp.damping.theta = cfg.damping;
    mp.max_iter = cfg.max_iter;
    return mp;
}

SolveReport dispatch_solve(const ExperimentConfig& cfg, const FactoredOp& op, const ScalarField& f) {
    const Scheme scheme = parse_scheme(cfg.scheme);
    switch (scheme) {
        case Scheme::Linear:
            return linear_report(op, f);
        case Scheme::Regularized: {
            RegularizedParams rp;
            rp.p = cfg.p;
            rp.n_reg = cfg.n_reg;
            rp.k_trunc = cfg.k_trunc;
            rp.damping.theta = cfg.damping;
            rp.tol = cfg.tol;
            rp.max_iter = cfg.max_iter;
            return solve_regularized(op, f, rp);
        }
        case Scheme::Monotone:
            return solve_monotone(op, f, monotone_params(cfg));
        case Scheme::FixedPoint: {
            FixedPointConfig fc;
            fc.p = cfg.p;
            fc.m = cfg.m;
            fc.l = cfg.l;
            fc.tol = cfg.tol;
            fc.max_iter = cfg.max_iter;
            return solve_fixed_point(op, f, fc);
        }
        case Scheme::Reaction: {
            ReactionParams rp;
            static_cast<MonotoneParams&>(rp) = monotone_params(cfg);
            rp.saturate_absorption = cfg.saturate_absorption;
            return solve_reaction(op, f, realize(cfg.g_spec, op.grid()), cfg.lambda, rp);
        }
        case Scheme::Newton: {
            NewtonParams np;
            np.p = cfg.p;
            np.n_reg = cfg.n_reg;
            np.max_iter = cfg.max_iter;
            return solve_newton(op, f, np);
        }
    }
    throw InvalidArgument("unhandled scheme");
}

RunOutput run_solve(const ExperimentConfig& cfg) {
    const GridPtr grid = build_grid(cfg.n_grid);
    const FactoredOp op(assemble(grid, cfg.s));
    const ScalarField f = realize(cfg.f_spec, grid);
    auto report = std::make_shared<SolveReport>(dispatch_solve(cfg, op, f));
    RunOutput out;
    out.result = to_json(*report);
    std::ostringstream line;
    line << "scheme " << cfg.scheme << ": " << (report->converged ? "converged" : "not converged") << " ("
         << report->reason << ") after " << report->iterates_inner << " inner iterations";
    out.summary.push_back(line.str());
    out.summary.push_back("sup-norm of solution: " + format_double(report->final.sup_norm()));
    out.summary.push_back("equation residual: " + format_double(report->equation_residual));
    if (report->scheme == Scheme::Monotone || report->scheme == Scheme::Reaction) {
        out.summary.push_back("worst ordering violation: " + format_double(report->monotone_violation) +
                              (report->ordering_flagged ? " (flagged)" : ""));
    }
    if (report->scheme == Scheme::FixedPoint) {
        out.summary.push_back("ball threshold l^(1/(2s)) = " + format_double(report->ball_threshold) +
                              ", l^(1/p) = " + format_double(report->ball_threshold_alt) +
                              ", binding: " + report->binding_threshold);
    }
    out.write_extra = [report](const std::filesystem::path& dir) {
        write_history_csv(dir / "history.csv", *report);
        write_field_csv(dir / "solution.csv", report->final);
    };
    return out;
}

std::vector<std::string> scan_summary(const ScanResult& scan) {
    std::vector<std::string> lines;
    for (std::size_t j = 0; j < scan.parameter_grid.size(); ++j) {
        std::string line = scan.sweep_name + " = " + format_double(scan.parameter_grid[j]) + ": " +
                           to_string(scan.verdicts[j].verdict) + " (ratio " +
                           format_double(scan.verdicts[j].last_ratio) + ")";
        if (scan.verdicts[j].log_type) line += ", log-type";
        if (!scan.labels[j].empty()) line += ", " + scan.labels[j];
        lines.push_back(line);
    }
    lines.push_back("predicted threshold: " + format_double(scan.predicted_threshold));
    lines.push_back("empirical threshold: " + format_double(scan.empirical_threshold));
    lines.push_back(std::string("verdicts monotone in the sweep: ") + (scan.monotone_verdicts ? "yes" : "no"));
    return lines;
}

RunOutput scan_output(ScanResult scan) {
    auto shared = std::make_shared<ScanResult>(std::move(scan));
    RunOutput out;
    out.result = to_json(*shared);
    out.summary = scan_summary(*shared);
    out.write_extra = [shared](const std::filesystem::path& dir) { write_scan_csv(dir / "scan.csv", *shared); };
    return out;
}

RunOutput run_scan(const ExperimentConfig& cfg) {
    ScanOptions opts;
    opts.threads = cfg.threads;
    const auto values = default_values(cfg);
    if (cfg.kind == "grad-integrability") {
        return scan_output(gradient_integrability_scan(cfg.s, cfg.f_spec, values, cfg.refinements, cfg.w_exp, opts));
    }
    if (cfg.kind == "sobolev-gain") return scan_output(sobolev_gain_scan(cfg.s, cfg.m, values, cfg.refinements, opts));
    HardyScan hs = hardy_scan(cfg.p, values, cfg.refinements);
    RunOutput out = scan_output(hs.scan);
    json numer = json::array();
    for (const auto& row : hs.numerators) {
        json r = json::array();
        for (double v : row) r.push_back(number(v));
        numer.push_back(r);
    }
    out.result["numerators"] = numer;
    out.result["non_hardy"] = hs.non_hardy;
    return out;
}

RunOutput run_dirac(const ExperimentConfig& cfg) {
    ScanOptions opts;
    opts.threads = cfg.threads;
    RunOutput out = scan_output(dirac_blowup_scan(cfg.s, default_values(cfg), cfg.eps, cfg.n_grid, cfg.mass, opts));
    out.result["surrogate"] = "linear problem: p_* >= 2s in N = 1 puts every p > 2s outside the monotone scheme";
    return out;
}

RunOutput run_nonexist(const ExperimentConfig& cfg) {
    ScanOptions opts;
    opts.threads = cfg.threads;
    NonexistenceScan ns = nonexistence_scan(cfg.s, default_values(cfg), cfg.refinements, opts);
    RunOutput out = scan_output(ns.scan);
    json aux = json::array();
    for (const auto& row : ns.auxiliary) {
        json r = json::array();
        for (double v : row) r.push_back(number(v));
        aux.push_back(r);
    }
    out.result["gradient_norms"] = aux;
    return out;
}

RunOutput run_validate(const ExperimentConfig& cfg) {
    const GridPtr grid = build_grid(cfg.n_grid);
    auto op = std::make_shared<FracOp>(assemble(grid, cfg.s));
    const std::size_t n = grid->size();
    double max_abs = 0.0, asym = 0.0, min_margin = std::numeric_limits<double>::infinity();
    bool signs = true;
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = op->at(i, j);
            max_abs = std::max(max_abs, std::abs(a));
            asym = std::max(asym, std::abs(a - op->at(j, i)));
            if (j != i) {
                off += std::abs(a);
                signs = signs && a < 0.0;
            }
        }
        min_margin = std::min(min_margin, (op->at(i, i) - off) / op->at(i, i));
    }
    const double s = cfg.s;
    auto w = [s](double x) { return std::pow(1.0 - x * x, s); };
    const ScalarField aw = op->apply(sample(grid, w));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(grid->node(i)) <= 0.5) {
            lo = std::min(lo, aw[i]);
            hi = std::max(hi, aw[i]);
        }
    }
    const double spread = (hi - lo) / hi;
    json points = json::array();
    double worst = 0.0;
    for (double target : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(grid->node(i) - target) < std::abs(grid->node(best) - target)) best = i;
        }
        const double ref = reference_operator(w, grid->node(best), s);
        const double rel = std::abs(aw[best] - ref) / std::abs(ref);
        worst = std::max(worst, rel);
        points.push_back(json{{"x", number(grid->node(best))}, {"matrix", number(aw[best])},
                              {"quadrature", number(ref)}, {"relative_error", number(rel)}});
    }
    RunOutput out;
    out.result = json{{"n", n},
                      {"s", number(s)},
                      {"symmetry_error", number(asym / max_abs)},
                      {"offdiagonal_negative", signs},
                      {"min_dominance_margin", number(min_margin)},
                      {"spread_center", number(spread)},
                      {"oracle_points", points},
                      {"max_oracle_error", number(worst)},
                      {"pass", signs && asym <= 1e-12 * max_abs && min_margin > 0.0 && spread <= 0.01 && worst <= 0.01}};
    out.summary.push_back("symmetry error (relative): " + format_double(asym / max_abs));
    out.summary.push_back("smallest diagonal-dominance margin: " + format_double(min_margin));
    out.summary.push_back("relative spread of A w over |x| <= 0.5: " + format_double(spread));
    out.summary.push_back("worst deviation from the quadrature oracle: " + format_double(worst));
    out.summary.push_back(std::string("operator validation: ") + (out.result["pass"].get<bool>() ? "pass" : "FAIL"));
    if (cfg.dump_operator) {
        out.write_extra = [op](const std::filesystem::path& dir) { write_operator_dump(*op, dir / "operator.bin"); };
    }
    return out;
}

RunOutput run_compare(const ExperimentConfig& cfg) {
    const GridPtr grid = build_grid(cfg.n_grid);
    const FactoredOp op(assemble(grid, cfg.s));
    const ScalarField f1 = realize(cfg.f1_spec, grid);
    const ScalarField f2 = realize(cfg.f2_spec, grid);
    const double data_excess = max_excess(f1, f2);
    if (data_excess > 0.0) {
        throw InvalidArgument("compare: f1 <= f2 fails on the grid (max excess " + format_double(data_excess) + ")");
    }
    ExperimentConfig single = cfg;
    single.f_spec = cfg.f1_spec;
    const SolveReport r1 = dispatch_solve(single, op, f1);
    const SolveReport r2 = dispatch_solve(single, op, f2);
    const double violation = max_excess(r1.final, r2.final);
    const double tolerance = 1e-6 * r2.final.sup_norm();
    double u2_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r2.final.size(); ++i) u2_min = std::min(u2_min, r2.final[i]);
    const bool pass = violation <= tolerance;
    RunOutput out;
    out.result = json{{"scheme", cfg.scheme},
                      {"violation", number(violation)},
                      {"tolerance", number(tolerance)},
                      {"pass", pass},
                      {"u2_min", number(u2_min)},
                      {"u2_nonnegative", u2_min >= 0.0},
                      {"solve1", to_json(r1, false)},
                      {"solve2", to_json(r2, false)}};
    out.summary.push_back("worst violation of u1 <= u2: " + format_double(violation) + " (tolerance " +
                          format_double(tolerance) + ")");
    out.summary.push_back(std::string("comparison: ") + (pass ? "pass" : "FAIL"));
    return out;
}

}  // namespace

Settings parse_config_text(const std::string& text, const std::string& source) {
    Settings out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        if (!setters().count(key)) throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

Settings read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot read config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
    it->second(cfg, key, value);
}

void apply_settings(ExperimentConfig& cfg, const Settings& settings) {
    for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : setters()) out.push_back(k);
        return out;
    }();
    return keys;
}

void apply_environment(ExperimentConfig& cfg) {
    if (const char* dir = std::getenv("OUT_DIR"); dir != nullptr && *dir != '\0') cfg.out_dir = dir;
    if (const char* thr = std::getenv("THREADS"); thr != nullptr && *thr != '\0') {
        const auto cap = static_cast<unsigned>(to_unsigned("THREADS", thr));
        if (cap > 0) cfg.threads = std::min(std::max(cfg.threads, 1u), cap);
    }
}

void validate(const ExperimentConfig& cfg) {
    require(std::find(kSubcommands.begin(), kSubcommands.end(), cfg.subcommand) != kSubcommands.end(),
            "unknown subcommand '" + cfg.subcommand + "'");
    require_order(cfg.s, "s");
    require(cfg.n_grid >= 3, "n_grid must be at least 3");
    require(std::isfinite(cfg.p) && cfg.p >= 1.0, "p must be a finite number >= 1");
    require(cfg.m >= 1.0, "m must be >= 1");
    require(cfg.beta >= 0.0 && cfg.beta < 2.0 * cfg.s - 1.0, "beta must lie in [0, 2s-1)");
    require(cfg.tol > 0.0, "tol must be positive");
    require(cfg.max_iter >= 1, "max_iter must be >= 1");
    require(cfg.damping > 0.0 && cfg.damping <= 1.0, "damping must lie in (0, 1]");
    require(!cfg.out_dir.empty(), "out_dir must not be empty");
    auto ascending_levels = [&] {
        require(cfg.refinements.size() >= 2, "refinements: need at least two grid sizes");
        for (std::size_t j = 0; j < cfg.refinements.size(); ++j) {
            require(cfg.refinements[j] >= 3, "refinements: grid sizes must be >= 3");
            require(j == 0 || cfg.refinements[j] > cfg.refinements[j - 1], "refinements must increase");
        }
    };
    auto ascending_values = [&](const std::vector<double>& v) {
        for (std::size_t j = 1; j < v.size(); ++j) require(v[j] > v[j - 1], "values must increase");
    };
    const std::string& sub = cfg.subcommand;
    if (sub == "solve" || sub == "compare") {
        const Scheme scheme = parse_scheme(cfg.scheme);
        if (sub == "solve") parse_data_spec(cfg.f_spec);
        if (sub == "compare") {
            require(!cfg.f1_spec.empty() && !cfg.f2_spec.empty(), "compare needs f1 and f2");
            require(scheme == Scheme::Linear || scheme == Scheme::Monotone, "compare supports the linear and monotone schemes");
            parse_data_spec(cfg.f1_spec);
            parse_data_spec(cfg.f2_spec);
        }
        if (scheme == Scheme::Monotone || scheme == Scheme::Reaction) {
            require(cfg.p > 1.0 && cfg.p < 2.0 * cfg.s, "the monotone scheme requires 1 < p < 2s");
            require(!cfg.n_sequence.empty(), "n_sequence must not be empty");
            for (std::size_t j = 0; j < cfg.n_sequence.size(); ++j) {
                require(cfg.n_sequence[j] >= 1.0 && (j == 0 || cfg.n_sequence[j] > cfg.n_sequence[j - 1]),
                        "n_sequence must increase from >= 1");
            }
        }
        if (scheme == Scheme::Regularized) {
            require(cfg.n_reg >= 1.0, "n_reg must be >= 1");
            require(cfg.k_trunc > 0.0, "k_trunc must be positive");
        }
        if (scheme == Scheme::FixedPoint) {
            require(cfg.p >= 2.0 * cfg.s && cfg.p < cfg.s / (1.0 - cfg.s), "the fixed-point scheme requires 2s <= p < s/(1-s)");
            require(cfg.m > 1.0 / ((cfg.p / (cfg.p - 1.0)) * (2.0 * cfg.s - 1.0)), "m must exceed N/(p'(2s-1))");
            require(cfg.l > 0.0, "l must be positive");
        }
        if (scheme == Scheme::Reaction) {
            require(!cfg.g_spec.empty(), "the reaction scheme needs a weight g");
            parse_data_spec(cfg.g_spec);
            require(cfg.lambda >= 0.0, "lambda must be non-negative");
        }
        if (scheme == Scheme::Newton) require(cfg.n_reg >= 1.0, "n_reg must be >= 1");
    } else if (sub == "scan") {
        require(cfg.kind == "grad-integrability" || cfg.kind == "sobolev-gain" || cfg.kind == "hardy",
                "scan kind must be grad-integrability, sobolev-gain or hardy");
        ascending_levels();
        ascending_values(cfg.values);
        if (cfg.kind == "grad-integrability") parse_data_spec(cfg.f_spec);
        if (cfg.kind == "hardy") require(cfg.p > 1.0, "hardy scan requires p > 1");
        for (double v : cfg.values) require(cfg.kind == "hardy" ? v > 0.0 : v >= 1.0, "swept exponents out of range");
    } else if (sub == "dirac") {
        require(cfg.eps.size() >= 2, "eps: need at least two widths");
        for (std::size_t j = 0; j < cfg.eps.size(); ++j) {
            require(cfg.eps[j] > 0.0 && cfg.eps[j] < 1.0, "eps values must lie in (0, 1)");
            require(j == 0 || cfg.eps[j] < cfg.eps[j - 1], "eps must decrease");
        }
        ascending_values(cfg.values);
        for (double v : cfg.values) require(v >= 1.0, "gradient exponents must be >= 1");
        require(cfg.mass > 0.0, "mass must be positive");
    } else if (sub == "nonexist") {
        ascending_levels();
        ascending_values(cfg.values);
        for (double v : cfg.values) require(v > 0.0, "p values must be positive");
    }
}

json config_to_json(const ExperimentConfig& cfg) {
    auto list = [](const auto& v) {
        json out = json::array();
        for (auto x : v) out.push_back(number(static_cast<double>(x)));
        return out;
    };
    return json{{"subcommand", cfg.subcommand}, {"s", number(cfg.s)}, {"p", number(cfg.p)},
                {"m", number(cfg.m)}, {"lambda", number(cfg.lambda)}, {"beta", number(cfg.beta)},
                {"l", number(cfg.l)}, {"n_grid", cfg.n_grid}, {"refinements", list(cfg.refinements)},
                {"values", list(cfg.values)}, {"eps", list(cfg.eps)}, {"n_sequence", list(cfg.n_sequence)},
                {"f", cfg.f_spec}, {"g", cfg.g_spec}, {"f1", cfg.f1_spec}, {"f2", cfg.f2_spec},
                {"scheme", cfg.scheme}, {"kind", cfg.kind}, {"tol", number(cfg.tol)}, {"max_iter", cfg.max_iter},
                {"damping", number(cfg.damping)}, {"n_reg", number(cfg.n_reg)}, {"k_trunc", number(cfg.k_trunc)},
                {"mass", number(cfg.mass)}, {"w_exp", number(cfg.w_exp)},
                {"saturate_absorption", cfg.saturate_absorption}, {"dump_operator", cfg.dump_operator},
                {"seed", cfg.seed}};
}

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const std::exception& e) {
        err << "fraclab: invalid configuration: " << e.what() << '\n';
        return kExitInvalid;
    }
    try {
        RunOutput result;
        const std::string& sub = cfg.subcommand;
        if (sub == "solve") {
            result = run_solve(cfg);
        } else if (sub == "scan") {
            result = run_scan(cfg);
        } else if (sub == "dirac") {
            result = run_dirac(cfg);
        } else if (sub == "nonexist") {
            result = run_nonexist(cfg);
        } else if (sub == "validate-operator") {
            result = run_validate(cfg);
        } else {
            result = run_compare(cfg);
        }
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        const ExponentSet exps = critical_exponents(1, cfg.s, cfg.m, cfg.beta);
        const json report{{"schema_version", kReportSchemaVersion},
                          {"tool", "fraclab"},
                          {"tool_version", FRACLAB_VERSION},
                          {"generated_at", timestamp()},
                          {"subcommand", sub},
                          {"config", config_to_json(cfg)},
                          {"exponents", to_json(exps)},
                          {"result", result.result}};
        write_json(dir / "report.json", report);
        if (result.write_extra) result.write_extra(dir);
        std::ofstream summary(dir / "summary.txt");
        summary << "fraclab " << FRACLAB_VERSION << " " << sub << " (s = " << format_double(cfg.s) << ")\n";
        summary << "critical exponents (N = 1): p_* = " << format_double(exps.p_star)
                << ", 1/(1-s) = " << format_double(exps.grad_blowup) << ", s/(1-s) = " << format_double(exps.p_upper)
                << ", non-existence above " << format_double(exps.nonexist_threshold) << '\n';
        for (const auto& line : result.summary) {
            summary << line << '\n';
            out << line << '\n';
        }
        return kExitOk;
    } catch (const NumericalFailure& e) {
        err << "fraclab: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "fraclab: invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DegenerateInput& e) {
        err << "fraclab: degenerate input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const SingularInput& e) {
        err << "fraclab: singular input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "fraclab: " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace fraclab
