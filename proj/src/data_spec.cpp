#include "fraclab/data_spec.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/norms.hpp"

namespace fraclab {
namespace {

std::vector<double> parse_numbers(const std::string& body, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) throw InvalidArgument("data spec '" + text + "': empty parameter");
        const std::string token = item.substr(first, last - first + 1);
        double value = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || !std::isfinite(value)) {
            throw InvalidArgument("data spec '" + text + "': cannot parse number '" + token + "'");
        }
        out.push_back(value);
    }
    return out;
}

void require_count(const DataSpec& spec, std::size_t lo, std::size_t hi) {
    const std::size_t n = spec.params.size();
    if (n < lo || n > hi) {
        std::ostringstream msg;
        msg << "data spec '" << spec.text << "': expected " << lo;
        if (hi != lo) msg << " to " << hi;
        msg << " parameters, got " << n;
        throw InvalidArgument(msg.str());
    }
}

// ∫_a^b (1-y)^t dy for 0 ≤ a ≤ b < 1.
double delta_power_integral_right(double a, double b, double t) {
    if (b <= a) return 0.0;
    if (t == -1.0) return std::log((1.0 - a) / (1.0 - b));
    const double e = t + 1.0;
    return (std::pow(1.0 - a, e) - std::pow(1.0 - b, e)) / e;
}

// ∫_a^b |y|^t dy for 0 ≤ a ≤ b.
double abs_power_integral_right(double a, double b, double t) {
    if (b <= a) return 0.0;
    if (t == -1.0) {
        if (a == 0.0) return std::numeric_limits<double>::infinity();
        return std::log(b / a);
    }
    const double e = t + 1.0;
    if (a == 0.0 && e < 0.0) return std::numeric_limits<double>::infinity();
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("data spec: cannot open file '" + path + "'");
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        const auto comma = line.find_last_of(',');
        std::string token = comma == std::string::npos ? line : line.substr(comma + 1);
        const auto first = token.find_first_not_of(" \t");
        const auto last = token.find_last_not_of(" \t");
        token = first == std::string::npos ? std::string{} : token.substr(first, last - first + 1);
        double value = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            // A leading non-numeric row is a header.
            if (out.empty() && line_no == 1) continue;
            throw InvalidArgument(path + ":" + std::to_string(line_no) + ": cannot parse sample '" + token + "'");
        }
        out.push_back(value);
    }
    return out;
}

}  // namespace

DataSpec parse_data_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidArgument("data spec '" + text + "': expected kind:parameters");
    }
    const std::string kind = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);
    DataSpec spec;
    spec.text = text;
    if (kind == "file") {
        if (body.empty()) throw InvalidArgument("data spec '" + text + "': missing path");
        spec.kind = DataSpec::Kind::File;
        spec.path = body;
        return spec;
    }
    spec.params = parse_numbers(body, text);
    if (kind == "const") {
        spec.kind = DataSpec::Kind::Constant;
        require_count(spec, 1, 1);
    } else if (kind == "delta-power") {
        spec.kind = DataSpec::Kind::DeltaPower;
        require_count(spec, 1, 2);
    } else if (kind == "abs-power") {
        spec.kind = DataSpec::Kind::AbsPower;
        require_count(spec, 1, 3);
        if (spec.params[0] <= -1.0) {
            throw InvalidArgument("data spec '" + text + "': exponent must exceed -1 (local integrability)");
        }
    } else if (kind == "bump") {
        spec.kind = DataSpec::Kind::Bump;
        require_count(spec, 2, 3);
        if (!(spec.params[1] > 0.0)) throw InvalidArgument("data spec '" + text + "': width must be positive");
        if (std::abs(spec.params[0]) >= 1.0) throw InvalidArgument("data spec '" + text + "': center must lie in (-1, 1)");
    } else if (kind == "cos") {
        spec.kind = DataSpec::Kind::Cosine;
        require_count(spec, 1, 1);
    } else {
        throw InvalidArgument("data spec '" + text + "': unknown kind '" + kind +
                              "' (const, delta-power, abs-power, bump, cos, file)");
    }
    return spec;
}

double delta_power_cell_average(double x, double h, double t) {
    double a = x - 0.5 * h;
    double b = x + 0.5 * h;
    // δ is even: fold onto [0, 1).
    double total = 0.0;
    if (a < 0.0 && b > 0.0) {
        total = delta_power_integral_right(0.0, -a, t) + delta_power_integral_right(0.0, b, t);
    } else if (b <= 0.0) {
        total = delta_power_integral_right(-b, -a, t);
    } else {
        total = delta_power_integral_right(a, b, t);
    }
    return total / h;
}

double abs_power_cell_average(double x, double h, double t, double c) {
    const double a = x - 0.5 * h - c;
    const double b = x + 0.5 * h - c;
    double total = 0.0;
    if (a < 0.0 && b > 0.0) {
        total = abs_power_integral_right(0.0, -a, t) + abs_power_integral_right(0.0, b, t);
    } else if (b <= 0.0) {
        total = abs_power_integral_right(-b, -a, t);
    } else {
        total = abs_power_integral_right(a, b, t);
    }
    return total / h;
}

double bump_profile(double x, double center, double width) {
    const double tau = (x - center) / width;
    if (std::abs(tau) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - tau * tau));
}

ScalarField realize(const DataSpec& spec, const GridPtr& grid) {
    const double h = grid->h();
    const auto& p = spec.params;
    ScalarField out(grid);
    switch (spec.kind) {
        case DataSpec::Kind::Constant:
            out = sample(grid, [&](double) { return p[0]; });
            break;
        case DataSpec::Kind::DeltaPower: {
            const double scale = p.size() > 1 ? p[1] : 1.0;
            out = sample(grid, [&](double x) { return scale * delta_power_cell_average(x, h, p[0]); });
            break;
        }
        case DataSpec::Kind::AbsPower: {
            const double center = p.size() > 1 ? p[1] : 0.0;
            const double scale = p.size() > 2 ? p[2] : 1.0;
            out = sample(grid, [&](double x) { return scale * abs_power_cell_average(x, h, p[0], center); });
            break;
        }
        case DataSpec::Kind::Bump: {
            const double mass = p.size() > 2 ? p[2] : 1.0;
            out = sample(grid, [&](double x) { return bump_profile(x, p[0], p[1]); });
            const double raw = integral(out);
            if (!(raw > 0.0)) {
                throw InvalidArgument("data spec '" + spec.text + "': bump narrower than the grid spacing");
            }
            out *= mass / raw;
            break;
        }
        case DataSpec::Kind::Cosine:
            out = sample(grid, [&](double x) { return p[0] * std::cos(0.5 * std::numbers::pi * x); });
            break;
        case DataSpec::Kind::File: {
            auto values = read_samples(spec.path);
            if (values.size() != grid->size()) {
                throw InvalidArgument("data spec '" + spec.text + "': file has " + std::to_string(values.size()) +
                                      " samples, grid has " + std::to_string(grid->size()));
            }
            out = ScalarField(grid, std::move(values));
            break;
        }
    }
    if (!out.all_finite()) throw InvalidArgument("data spec '" + spec.text + "': non-finite samples on this grid");
    return out;
}

ScalarField realize(const std::string& text, const GridPtr& grid) {
    return realize(parse_data_spec(text), grid);
}

}  // namespace fraclab
