#include <permfield/report.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace permfield {

std::string to_string(VerdictStatus status) {
    switch (status) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::warning: return "warning";
    case VerdictStatus::info: return "info";
    }
    return "info";
}

Verdict check(std::string name, bool ok, double value, std::string detail) {
    return {std::move(name), ok ? VerdictStatus::pass : VerdictStatus::fail, std::move(detail), value};
}

Verdict note(std::string name, double value, std::string detail) {
    return {std::move(name), VerdictStatus::info, std::move(detail), value};
}

nlohmann::json json_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value < 0 ? "-inf" : "inf";
    }
    return value;
}

std::string csv_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value < 0 ? "-inf" : "inf";
    }
    if (value == std::floor(value) && std::fabs(value) < 9.0e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

bool ExperimentReport::passed() const {
    for (const auto& v : verdicts) {
        if (v.status == VerdictStatus::fail) {
            return false;
        }
    }
    return true;
}

const Verdict* ExperimentReport::find_verdict(const std::string& verdict_name) const {
    for (const auto& v : verdicts) {
        if (v.name == verdict_name) {
            return &v;
        }
    }
    return nullptr;
}

std::string ExperimentReport::stem() const {
    return name + "-" + std::to_string(seed);
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    out["name"] = name;
    out["provenance"] = {{"software", "permfield"}, {"version", kSoftwareVersion}, {"seed", seed}};
    out["config"] = config;
    out["statistics"] = statistics;
    out["rows"] = {{"file", stem() + ".csv"}, {"columns", columns}, {"count", rows.size()}};
    nlohmann::json verdict_list = nlohmann::json::array();
    for (const auto& v : verdicts) {
        verdict_list.push_back(
            {{"name", v.name}, {"status", to_string(v.status)}, {"value", json_number(v.value)}, {"detail", v.detail}});
    }
    out["verdicts"] = verdict_list;
    out["passed"] = passed();
    return out;
}

std::string ExperimentReport::rows_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::logic_error("report row width does not match columns");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += csv_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

} // namespace

std::vector<std::filesystem::path> ExperimentReport::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto json_path = dir / (stem() + ".json");
    write_file(json_path, to_json().dump(2) + "\n");
    written.push_back(json_path);
    auto csv_path = dir / (stem() + ".csv");
    write_file(csv_path, rows_csv());
    written.push_back(csv_path);
    for (std::size_t i = 0; i < plots.size(); ++i) {
        std::string suffix = i == 0 ? "" : "-" + std::to_string(i + 1);
        auto svg_path = dir / (stem() + suffix + ".svg");
        write_file(svg_path, emit_plot(plots[i]));
        written.push_back(svg_path);
    }
    return written;
}

} // namespace permfield
