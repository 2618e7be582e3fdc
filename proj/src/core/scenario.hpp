#pragma once

#include <map>
#include <string>
#include <vector>

namespace sconv {

/// Flat "key = value" configuration with dotted section names.
/// '#' starts a comment; blank lines are ignored.
struct KeyValueConfig {
    std::map<std::string, std::string> entries;

    static KeyValueConfig parse(const std::string& text);
    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    int get(const std::string& key, int fallback) const;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ScenarioReport {
    std::string name;
    bool all_pass = false;
    std::vector<CheckResult> checks;
    std::vector<Table> tables;
    std::map<std::string, std::string> params;  // resolved configuration
};

struct ScenarioInfo {
    std::string name;
    std::string summary;
};

const std::vector<ScenarioInfo>& scenario_registry();

/// Runs a named scenario with flat-config overrides (s, n, dx,
/// directions, seed, ... as applicable).
ScenarioReport run_scenario(const std::string& name, const KeyValueConfig& overrides);

std::string report_to_json(const ScenarioReport& report);

} // namespace sconv
