#include "schema_check.hpp"

#include <permfield/plot.hpp>
#include <permfield/report.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace permfield;

namespace {

ExperimentReport sample_report() {
    ExperimentReport r;
    r.name = "demo";
    r.seed = 17;
    r.config = {{"name", "demo"}, {"n", 3}};
    r.statistics = {{"mean", 1.5}};
    r.columns = {"a", "b"};
    r.rows = {{1.0, 0.25}, {2.0, -std::numeric_limits<double>::infinity()}};
    r.verdicts = {check("ok", true, 1.0, "fine"), note("info", 0.5, "just a note")};
    PlotSpec p;
    p.title = "demo";
    p.series.push_back({"s", {0.0, 1.0}, {1.0, 2.0}});
    r.plots.push_back(p);
    return r;
}

} // namespace

TEST(Report, JsonValidatesAgainstSchema) {
    auto j = sample_report().to_json();
    EXPECT_TRUE(schema_check::check_report(j).empty());
    EXPECT_EQ(j["rows"]["file"], "demo-17.csv");
    EXPECT_EQ(j["provenance"]["seed"], 17);
    EXPECT_TRUE(j["passed"].get<bool>());
    nlohmann::json broken = j;
    broken.erase("verdicts");
    EXPECT_FALSE(schema_check::check_report(broken).empty());
    broken = j;
    broken["verdicts"][0]["status"] = "maybe";
    EXPECT_FALSE(schema_check::check_report(broken).empty());
}

TEST(Report, CsvFormatting) {
    EXPECT_EQ(sample_report().rows_csv(), "a,b\n1,0.25\n2,-inf\n");
    EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
    EXPECT_EQ(json_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    ExperimentReport bad = sample_report();
    bad.rows.push_back({1.0});
    EXPECT_THROW(bad.rows_csv(), std::logic_error);
}

TEST(Report, FailedVerdictFailsReport) {
    ExperimentReport r = sample_report();
    r.verdicts.push_back({"warn", VerdictStatus::warning, "w", 0.0});
    EXPECT_TRUE(r.passed());
    r.verdicts.push_back(check("bad", false, 0.0, "no"));
    EXPECT_FALSE(r.passed());
    EXPECT_NE(r.find_verdict("bad"), nullptr);
    EXPECT_EQ(r.find_verdict("absent"), nullptr);
}

TEST(Report, WritesNamedFiles) {
    auto dir = std::filesystem::temp_directory_path() / "permfield_report_test";
    std::filesystem::remove_all(dir);
    auto paths = sample_report().write(dir);
    ASSERT_EQ(paths.size(), 3u);
    EXPECT_EQ(paths[0].filename(), "demo-17.json");
    EXPECT_EQ(paths[1].filename(), "demo-17.csv");
    EXPECT_EQ(paths[2].filename(), "demo-17.svg");
    std::ifstream in(paths[0]);
    EXPECT_TRUE(schema_check::check_report(nlohmann::json::parse(in)).empty());
    std::filesystem::remove_all(dir);
}

TEST(Plot, DeterministicAndWellFormed) {
    PlotSpec p;
    p.title = "rate <function>";
    p.x_label = "x";
    p.y_label = "y";
    p.series.push_back({"curve", {0.0, 0.5, 1.0}, {0.0, 1.0, std::numeric_limits<double>::infinity()}});
    p.markers = {0.69};
    std::string a = emit_plot(p);
    EXPECT_EQ(a, emit_plot(p));
    EXPECT_EQ(a.rfind("<?xml", 0), 0u);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
    EXPECT_NE(a.find("rate &lt;function&gt;"), std::string::npos);
    EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(a.find("<polyline"), std::string::npos);
}

TEST(Plot, SinglePointAndHistogram) {
    PlotSpec p;
    p.series.push_back({"one", {0.3}, {1.0}});
    std::string svg = emit_plot(p);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
    PlotSpec h;
    h.kind = PlotKind::histogram;
    h.series.push_back({"h", {}, {1.0, 2.0, 2.0, 3.0}});
    EXPECT_NE(emit_plot(h).find("<rect x="), std::string::npos);
}

TEST(Plot, EmptySeriesRejected) {
    PlotSpec p;
    EXPECT_THROW(emit_plot(p), std::invalid_argument);
    p.series.push_back({"empty", {}, {}});
    EXPECT_THROW(emit_plot(p), std::invalid_argument);
}
