#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fraclab/report_io.hpp"

namespace fraclab {
namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TEST(ReportIo, NonFiniteNumbersBecomeStrings) {
    EXPECT_EQ(number(1.5), nlohmann::json(1.5));
    EXPECT_EQ(number(std::numeric_limits<double>::infinity()), nlohmann::json("inf"));
    EXPECT_EQ(number(-std::numeric_limits<double>::infinity()), nlohmann::json("-inf"));
    EXPECT_EQ(number(std::nan("")), nlohmann::json("nan"));
}

TEST(ReportIo, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 4.0, -2.5e-300, 6.02214076e23}) {
        const std::string text = format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        EXPECT_EQ(back, v) << text;
    }
}

TEST(ReportIo, ExponentSetFields) {
    const nlohmann::json j = to_json(critical_exponents(1, 0.75, 1.5));
    EXPECT_EQ(j.at("p_star").get<double>(), 2.0);
    EXPECT_EQ(j.at("grad_blowup").get<double>(), 4.0);
    EXPECT_EQ(j.at("sobolev_gain").get<double>(), 6.0);
}

TEST(ReportIo, SolveReportWithAndWithoutHistory) {
    SolveReport r;
    r.scheme = Scheme::Monotone;
    r.residual_history = {1.0, 0.5};
    r.norm_ledger = {2.0, 2.5};
    r.violation_history = {0.0, 0.0};
    r.final = ScalarField(build_grid(3));
    r.converged = true;
    r.reason = "converged";
    const nlohmann::json full = to_json(r);
    const nlohmann::json brief = to_json(r, false);
    EXPECT_EQ(full.at("scheme"), "monotone");
    EXPECT_EQ(full.at("residual_history").size(), 2u);
    EXPECT_FALSE(brief.contains("residual_history"));
    EXPECT_EQ(brief.at("converged"), true);
}

TEST(ReportIo, FilesHaveHeaders) {
    const auto dir = std::filesystem::temp_directory_path() / "fraclab_report_io_test";
    std::filesystem::create_directories(dir);
    const GridPtr g = build_grid(3);
    write_field_csv(dir / "u.csv", sample(g, [](double x) { return x * x; }));
    const std::string csv = slurp(dir / "u.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,delta,u");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

    write_json(dir / "r.json", nlohmann::json{{"b", 1}, {"a", 2}});
    const std::string js = slurp(dir / "r.json");
    EXPECT_LT(js.find("\"a\""), js.find("\"b\""));
    EXPECT_EQ(js.back(), '\n');

    ScanResult s;
    s.parameter_grid = {1.0};
    s.levels = {10.0, 20.0};
    s.observable = {{0.5, 0.6}};
    s.verdicts.resize(1);
    write_scan_csv(dir / "scan.csv", s);
    const std::string scan = slurp(dir / "scan.csv");
    EXPECT_EQ(scan.substr(0, scan.find('\n')), "sweep_value,refinement,observable,verdict");
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace fraclab
