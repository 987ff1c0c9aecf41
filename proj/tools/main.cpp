// adiascope — exact propagators for driven quantum systems, factorized into
// dynamic × geometric × error components.

#include <CLI11.hpp>

#include "adiascope/cli.hpp"
#include "adiascope/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"adiascope: adiabatic-evolution decomposition and dynamical-decoupling sweeps"};
    app.set_version_flag("--version", adiascope::kVersion);
    app.require_subcommand(1);

    std::string config;
    adiascope::cli::CommonFlags flags;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config, "JSON config file")->required();
        cmd->add_option_function<std::string>(
            "--out", [&](const std::string& v) { flags.out = v; }, "output file path");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { flags.seed = v; }, "quadrature seed override");
        cmd->add_option_function<int>(
            "--jobs", [&](int v) { flags.jobs = v; },
            "parallel sweep jobs (env ADIASCOPE_JOBS)");
        cmd->add_option_function<double>(
            "--tol", [&](double v) { flags.tol = v; }, "solver tolerance");
    };

    CLI::App* decompose = app.add_subcommand("decompose", "run one scenario, write the factor report");
    add_common(decompose, true);
    CLI::App* sweep_cp = app.add_subcommand("sweep-cp", "sweep CP pulse counts, write CSV");
    add_common(sweep_cp, true);
    CLI::App* sweep_drive = app.add_subcommand("sweep-drive", "sweep drive N', write CSV");
    add_common(sweep_drive, true);
    CLI::App* gamma = app.add_subcommand("gamma-solve", "solve the modulation-average condition");
    add_common(gamma, false);
    CLI::App* modulation = app.add_subcommand("modulation", "sample modulation functions, write CSV");
    add_common(modulation, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : adiascope::cli::kExitConfig;
    }

    if (decompose->parsed()) return adiascope::cli::cmd_decompose(config, flags);
    if (sweep_cp->parsed()) return adiascope::cli::cmd_sweep_cp(config, flags);
    if (sweep_drive->parsed()) return adiascope::cli::cmd_sweep_drive(config, flags);
    if (gamma->parsed()) return adiascope::cli::cmd_gamma_solve(flags);
    if (modulation->parsed()) return adiascope::cli::cmd_modulation(config, flags);
    return adiascope::cli::kExitConfig;
}
