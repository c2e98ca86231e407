#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "fraclab/diagnostics.hpp"
#include "fraclab/exponents.hpp"
#include "fraclab/solvers.hpp"

namespace fraclab {

inline constexpr int kReportSchemaVersion = 1;

/// Finite values as numbers; ±inf and NaN as the strings "inf", "-inf", "nan".
nlohmann::json number(double v);

nlohmann::json to_json(const ExponentSet& e);
nlohmann::json to_json(const RefinementVerdict& v);
nlohmann::json to_json(const ScalarField& u);
/// Everything except the per-iterate histories when `with_history` is false.
nlohmann::json to_json(const SolveReport& r, bool with_history = true);
nlohmann::json to_json(const ScanResult& s);
nlohmann::json to_json(const ViscosityReport& v);

/// Keys sorted, two-space indent, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// iter,residual,ball_norm,violation
void write_history_csv(const std::filesystem::path& path, const SolveReport& r);
/// sweep_value,refinement,observable,verdict
void write_scan_csv(const std::filesystem::path& path, const ScanResult& s);
/// x,delta,u
void write_field_csv(const std::filesystem::path& path, const ScalarField& u);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace fraclab
