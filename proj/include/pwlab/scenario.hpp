#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pwlab {

// Fully resolved run configuration (defaults, then config file, then flags).
struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 0;
    int grid_n = 0;
    int nmax = 0;
    int samples = 0;
    double domain_min = 0.0, domain_max = 0.0;
    double tau_frac = 0.0;
    double slit_k = 0.0, slit_a = 0.0, slit_l = 0.0;
    std::string out_dir;
};

// Values supplied on the command line; unset fields fall through to the
// config file and then the defaults.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> grid_n, nmax, samples;
    std::optional<std::pair<double, double>> domain;
    std::optional<double> tau_frac;
    std::optional<std::string> out_dir;
};

// key=value lines; blank lines and #-comments ignored. ConfigError on
// malformed lines or duplicate keys.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// "MIN,MAX" into a pair; ConfigError otherwise.
std::pair<double, double> parse_domain(const std::string& text);

// Merges and validates. Unknown keys, unknown scenarios, and out-of-range
// values are ConfigErrors; nothing is written to disk here.
ScenarioConfig resolve_config(const std::string& scenario,
                              const std::map<std::string, std::string>& file_entries,
                              const ConfigOverrides& flags);

struct Metric {
    std::string name;
    double value = 0.0;
    double target = 0.0;     // meaningless when informational
    double tolerance = 0.0;  // meaningless when informational
    bool pass = true;
    bool informational = false;
};

struct RunReport {
    ScenarioConfig config;
    std::vector<Metric> metrics;
    double wall_time_s = 0.0;

    bool all_pass() const;
};

// Runs the scenario, writes report.json and the scenario's CSV files under
// config.out_dir, and returns the report. A numerical failure mid-run still
// produces a report.json carrying the error before the exception continues.
RunReport run_scenario(const ScenarioConfig& config);

} // namespace pwlab
