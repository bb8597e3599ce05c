#pragma once

// Minimal JSON-schema subset: type, enum, required, properties, items, minimum.

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace schema_check {

inline bool type_matches(const nlohmann::json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    if (type == "null") return v.is_null();
    return false;
}

inline void validate(const nlohmann::json& v, const nlohmann::json& schema, const std::string& path,
                     std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(v, t.get<std::string>());
        } else {
            for (const auto& alt : t) {
                ok = ok || type_matches(v, alt.get<std::string>());
            }
        }
        if (!ok) {
            errors.push_back(path + ": wrong type");
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) {
            found = found || e == v;
        }
        if (!found) {
            errors.push_back(path + ": not in enum");
        }
    }
    if (schema.contains("minimum") && v.is_number() && v.get<double>() < schema["minimum"].get<double>()) {
        errors.push_back(path + ": below minimum");
    }
    if (v.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!v.contains(key.get<std::string>())) {
                    errors.push_back(path + ": missing " + key.get<std::string>());
                }
            }
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema["properties"].items()) {
                if (v.contains(key)) {
                    validate(v[key], sub, path + "." + key, errors);
                }
            }
        }
    }
    if (v.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            validate(v[i], schema["items"], path + "[" + std::to_string(i) + "]", errors);
        }
    }
}

inline nlohmann::json load_report_schema() {
    std::ifstream in(std::string(PERMFIELD_SCHEMA_DIR) + "/report.schema.json");
    return nlohmann::json::parse(in);
}

inline std::vector<std::string> check_report(const nlohmann::json& report) {
    std::vector<std::string> errors;
    validate(report, load_report_schema(), "$", errors);
    return errors;
}

} // namespace schema_check
