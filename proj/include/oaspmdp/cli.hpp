#pragma once

#include "oaspmdp/experiment.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace oasp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_runtime_error = 2;

struct RunConfig {
    std::string scenario = "walls";
    int width = 10;
    int height = 10;
    int episodes = 3000;
    int trials = 30;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    LearnParams params;
    std::vector<double> wall_ratios;  // empty: scenario default
    std::vector<double> probs;        // p_intended per phase; empty: scenario default
    std::vector<int> changes{1000, 2000};
    std::filesystem::path out = "out";

    /// Scenario plan with the overrides applied. Throws std::invalid_argument
    /// when the result is inconsistent.
    ScenarioSpec to_spec() const;
};

/// Bad flag, bad value or failed validation. what() carries the usage hint.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `--help` was requested; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses flags (argv[0] is the program name). A `--config PATH` file of
/// `key = value` lines supplies values that explicit flags override. The
/// output directory defaults to $OASPMDP_OUT, else "out".
RunConfig parse_args(const std::vector<std::string>& argv);

/// Runs the scenario and writes `<out>/<scenario>/`: curves.csv,
/// grid_phase<k>.txt, programs/ and qtable.csv (the last three from trial 0).
/// Prints one summary line per agent to `log`.
void run(const RunConfig& config, std::ostream& log);

/// parse_args + run with exit codes 0 (ok), 1 (config error), 2 (runtime error).
int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace oasp::cli
