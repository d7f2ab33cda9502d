#pragma once

// Shared helpers for the INI-style scenario and estimator-config formats.
// Internal header; not installed.

#include "nfsage/geometry.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace nfsage::detail {

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<KeyValue> entries;
};

[[noreturn]] inline void fail(const std::string& origin, int line, const std::string& msg) {
    throw parse_error(origin + ":" + std::to_string(line) + ": " + msg);
}

inline std::vector<Section> tokenize(std::istream& in, const std::string& origin) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find_first_of("#;");
        std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "malformed section header");
            sections.push_back({line.substr(1, line.size() - 2), line_no, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        if (sections.empty()) fail(origin, line_no, "key outside of any section");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const auto sb = s.find_first_not_of(" \t");
            const auto se = s.find_last_not_of(" \t");
            s = (sb == std::string::npos) ? "" : s.substr(sb, se - sb + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) fail(origin, line_no, "empty key");
        sections.back().entries.push_back({key, value, line_no});
    }
    return sections;
}

inline double parse_double(const std::string& origin, const KeyValue& kv) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(kv.value, &pos);
    } catch (const std::exception&) {
        fail(origin, kv.line, "expected a number for '" + kv.key + "'");
    }
    if (pos != kv.value.size()) fail(origin, kv.line, "trailing characters after number");
    return v;
}

inline long parse_int(const std::string& origin, const KeyValue& kv) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(kv.value, &pos);
    } catch (const std::exception&) {
        fail(origin, kv.line, "expected an integer for '" + kv.key + "'");
    }
    if (pos != kv.value.size()) fail(origin, kv.line, "trailing characters after integer");
    return v;
}

inline bool parse_switch(const std::string& origin, const KeyValue& kv) {
    if (kv.value == "on" || kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "off" || kv.value == "false" || kv.value == "0") return false;
    fail(origin, kv.line, "expected on/off for '" + kv.key + "'");
}

inline Point3 parse_point(const std::string& origin, const KeyValue& kv) {
    std::istringstream ss(kv.value);
    double x, y, z;
    if (!(ss >> x >> y)) fail(origin, kv.line, "expected 2 or 3 coordinates for '" + kv.key + "'");
    if (!(ss >> z)) z = 0.0;
    std::string rest;
    if (ss >> rest) fail(origin, kv.line, "too many coordinates for '" + kv.key + "'");
    return {x, y, z};
}

struct ArraySpec {
    std::string layout = "linear";
    long count = 1;
    long count2 = 1;
    double spacing_wl = 0.5;
    Point3 origin;
    Point3 axis{1, 0, 0};
    Point3 axis2{0, 1, 0};
    Point3 plane_normal{0, 0, 1};
    long reference = 1;
    std::vector<Point3> explicit_elements;
    int line = 0;
};

ArraySpec parse_array_section(const std::string& origin, const Section& sec);
std::vector<Point3> generate_elements(const std::string& origin, const ArraySpec& a,
                                      double wavelength);

} // namespace nfsage::detail
