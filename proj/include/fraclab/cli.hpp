#pragma once

#include <iosfwd>
#include <json.hpp>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Malformed or unknown configuration entry.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct ExperimentConfig {
    std::string subcommand = "solve";  ///< solve | scan | validate-operator | dirac | nonexist | compare

    double s = 0.75;
    double p = 1.2;
    double m = 1.0;
    double lambda = 0.0;
    double beta = 0.0;
    double l = 1.0;  ///< ball radius parameter of the fixed-point scheme

    std::size_t n_grid = 400;
    std::vector<std::size_t> refinements{200, 400, 800, 1600};
    std::vector<double> values;  ///< swept exponents (a, q, p or t)
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    std::vector<double> n_sequence{2, 4, 8, 16, 32, 64, 128, 256};

    std::string f_spec = "const:1";
    std::string g_spec;
    std::string f1_spec;
    std::string f2_spec;
    std::string scheme = "monotone";
    std::string kind = "grad-integrability";  ///< scan kind: grad-integrability | sobolev-gain | hardy

    double tol = 1e-8;
    std::size_t max_iter = 1000;
    double damping = 0.5;
    double n_reg = std::numeric_limits<double>::infinity();
    double k_trunc = 1.0;
    double mass = 1.0;
    double w_exp = 0.0;
    bool saturate_absorption = false;
    bool dump_operator = false;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_dir = "out";
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Flat key=value lines; '#' starts a comment. Throws ConfigError naming
/// `source` and the line number.
Settings parse_config_text(const std::string& text, const std::string& source);
Settings read_config_file(const std::string& path);

/// Applies one setting. Unknown keys and malformed values throw ConfigError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(ExperimentConfig& cfg, const Settings& settings);

/// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();

/// OUT_DIR replaces out_dir; THREADS caps the worker count.
void apply_environment(ExperimentConfig& cfg);

/// Checks every field used by the subcommand. Throws InvalidArgument.
void validate(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Validates, runs, and writes report.json, CSVs and summary.txt into
/// cfg.out_dir. Returns an exit status; diagnostics go to `err`.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace fraclab
