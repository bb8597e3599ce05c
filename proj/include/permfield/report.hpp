#pragma once

#include <permfield/plot.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace permfield {

inline constexpr const char* kSoftwareVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class VerdictStatus { pass, fail, warning, info };

std::string to_string(VerdictStatus status);

struct Verdict {
    std::string name;
    VerdictStatus status = VerdictStatus::info;
    std::string detail;
    double value = 0.0;
};

Verdict check(std::string name, bool ok, double value, std::string detail);
Verdict note(std::string name, double value, std::string detail);

/// Finite values as numbers, non-finite as the strings "-inf", "inf", "nan".
nlohmann::json json_number(double value);
std::string csv_number(double value);

struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json statistics = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<Verdict> verdicts;
    std::vector<PlotSpec> plots;

    /// False iff some verdict failed. Warnings and notes never fail a report.
    bool passed() const;
    const Verdict* find_verdict(const std::string& verdict_name) const;
    std::string stem() const;
    nlohmann::json to_json() const;
    std::string rows_csv() const;
    /// Writes <stem>.json, <stem>.csv and one SVG per plot (<stem>.svg, then
    /// <stem>-2.svg, ...). Returns the written paths.
    std::vector<std::filesystem::path> write(const std::filesystem::path& dir) const;
};

} // namespace permfield
