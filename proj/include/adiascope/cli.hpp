// cli.hpp — config parsing, CSV/report writers, and the command entry points
// shared by the adiascope binary and the tests.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adiascope/experiments.hpp"

namespace adiascope::cli {

// Exit codes: 0 ok, 2 usage/config, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flag overrides applied on top of the config file.
struct CommonFlags {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;  // falls back to ADIASCOPE_JOBS, then 1
    std::optional<double> tol;
};

struct ScenarioConfig {
    bool is_pulse = false;
    CpScenario cp;
    DriveScenario drive;
};

struct RunConfig {
    ScenarioConfig scenario;
    RunSettings settings;
    std::string output = "adiascope_out.csv";
    std::uint64_t config_hash = 0;
    int modulation_samples = 64;

    // Sweep ranges (only the matching command reads them).
    std::vector<int> cp_n_values;
    std::vector<DriveKind> drive_kinds;
    std::vector<double> drive_nprime_values;
};

// Strict parse: unknown keys anywhere are a ConfigError.
RunConfig load_config(const std::string& path, const CommonFlags& flags);

int cmd_decompose(const std::string& config_path, const CommonFlags& flags);
int cmd_sweep_cp(const std::string& config_path, const CommonFlags& flags);
int cmd_sweep_drive(const std::string& config_path, const CommonFlags& flags);
int cmd_gamma_solve(const CommonFlags& flags);
int cmd_modulation(const std::string& config_path, const CommonFlags& flags);

// Formatting helpers (12 significant digits, LF endings, C locale).
std::string format_number(double v);
std::string sweep_csv(const SweepResult& result, std::uint64_t config_hash,
                      std::uint64_t seed);

}  // namespace adiascope::cli
