#include "adiascope/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "adiascope/version.hpp"

namespace adiascope::cli {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ConfigError("\"" + key + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError("\"" + key + "\" must be a number");
    return obj[key].get<double>();
}

ScenarioConfig parse_scenario(const json& sc) {
    if (!sc.is_object()) throw ConfigError("\"scenario\" must be an object");
    if (!sc.contains("type")) throw ConfigError("scenario: missing \"type\"");
    const std::string type = sc["type"].get<std::string>();
    ScenarioConfig out;
    if (type == "cp") {
        reject_unknown(sc, {"type", "theta", "phi0", "phiT", "pulses", "rotation"}, "scenario");
        out.is_pulse = true;
        out.cp.theta = require_number(sc, "theta", "scenario");
        out.cp.phi0 = number_or(sc, "phi0", 0.0);
        out.cp.phiT = number_or(sc, "phiT", 2.0 * std::numbers::pi);
        if (sc.contains("pulses")) {
            if (!sc["pulses"].is_number_integer() || sc["pulses"].get<int>() < 1)
                throw ConfigError("scenario: \"pulses\" must be a positive integer");
            out.cp.n_pulses = sc["pulses"].get<int>();
        }
        if (sc.contains("rotation")) {
            const std::string rot = sc["rotation"].get<std::string>();
            if (rot == "pi")
                out.cp.two_pi_rotation = false;
            else if (rot == "two_pi")
                out.cp.two_pi_rotation = true;
            else
                throw ConfigError("scenario: \"rotation\" must be \"pi\" or \"two_pi\"");
        }
    } else if (type == "drive") {
        reject_unknown(sc, {"type", "kind", "n_prime", "theta", "omega", "t_total", "gamma"},
                       "scenario");
        out.is_pulse = false;
        out.drive.theta = require_number(sc, "theta", "scenario");
        out.drive.n_prime = number_or(sc, "n_prime", 1.0);
        out.drive.omega = number_or(sc, "omega", 2.0 * std::numbers::pi);
        out.drive.t_total = number_or(sc, "t_total", 1.0);
        out.drive.gamma = number_or(sc, "gamma", 0.0);
        if (out.drive.t_total <= 0.0) throw ConfigError("scenario: t_total must be positive");
        if (sc.contains("kind")) {
            const auto k = parse_drive_kind(sc["kind"].get<std::string>());
            if (!k) throw ConfigError("scenario: unknown drive kind");
            out.drive.kind = *k;
        }
    } else {
        throw ConfigError("scenario: type must be \"cp\" or \"drive\"");
    }
    return out;
}

}  // namespace

RunConfig load_config(const std::string& path, const CommonFlags& flags) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(root, {"scenario", "integrator", "quadrature", "output", "sweep",
                          "modulation_samples"},
                   "config root");
    if (!root.contains("scenario")) throw ConfigError("config: missing \"scenario\"");

    RunConfig cfg;
    cfg.scenario = parse_scenario(root["scenario"]);

    if (root.contains("integrator")) {
        const json& integ = root["integrator"];
        reject_unknown(integ, {"slices_per_period", "path_steps", "verify", "convergence_tol"},
                       "integrator");
        cfg.settings.propagate.slices_per_period =
            static_cast<int>(number_or(integ, "slices_per_period", 256));
        cfg.settings.decompose.path_steps = static_cast<int>(number_or(integ, "path_steps", 4096));
        if (integ.contains("verify")) {
            if (!integ["verify"].is_boolean())
                throw ConfigError("integrator: \"verify\" must be a boolean");
            cfg.settings.propagate.verify_convergence = integ["verify"].get<bool>();
        }
        cfg.settings.propagate.convergence_tol = number_or(integ, "convergence_tol", 1e-8);
        if (cfg.settings.propagate.slices_per_period < 16)
            throw ConfigError("integrator: slices_per_period must be >= 16");
        if (cfg.settings.decompose.path_steps < 16)
            throw ConfigError("integrator: path_steps must be >= 16");
    }
    if (root.contains("quadrature")) {
        const json& q = root["quadrature"];
        reject_unknown(q, {"method", "polar", "azimuth", "samples", "seed"}, "quadrature");
        if (q.contains("method")) {
            const std::string m = q["method"].get<std::string>();
            if (m == "grid")
                cfg.settings.quadrature.method = QuadratureSpec::Method::sphere_grid;
            else if (m == "mc")
                cfg.settings.quadrature.method = QuadratureSpec::Method::haar_mc;
            else
                throw ConfigError("quadrature: method must be \"grid\" or \"mc\"");
        }
        cfg.settings.quadrature.polar_nodes = static_cast<int>(number_or(q, "polar", 64));
        cfg.settings.quadrature.azimuth_nodes = static_cast<int>(number_or(q, "azimuth", 128));
        cfg.settings.quadrature.mc_samples = static_cast<int>(number_or(q, "samples", 100000));
        if (q.contains("seed")) cfg.settings.quadrature.seed = q["seed"].get<std::uint64_t>();
    }
    if (root.contains("output")) cfg.output = root["output"].get<std::string>();
    if (root.contains("modulation_samples"))
        cfg.modulation_samples = root["modulation_samples"].get<int>();

    if (root.contains("sweep")) {
        const json& sw = root["sweep"];
        reject_unknown(sw, {"n_min", "n_max", "n_values", "nprime_values", "nprime_min",
                            "nprime_max", "nprime_step", "kinds"},
                       "sweep");
        if (sw.contains("n_values")) {
            for (const auto& v : sw["n_values"]) cfg.cp_n_values.push_back(v.get<int>());
        } else if (sw.contains("n_min") || sw.contains("n_max")) {
            const int lo = static_cast<int>(number_or(sw, "n_min", 1));
            const int hi = static_cast<int>(number_or(sw, "n_max", 0));
            for (int n = lo; n <= hi; ++n) cfg.cp_n_values.push_back(n);
        }
        if (sw.contains("nprime_values")) {
            for (const auto& v : sw["nprime_values"])
                cfg.drive_nprime_values.push_back(v.get<double>());
        } else if (sw.contains("nprime_min") || sw.contains("nprime_max")) {
            const double lo = number_or(sw, "nprime_min", 1.0);
            const double hi = number_or(sw, "nprime_max", 0.0);
            const double st = number_or(sw, "nprime_step", 1.0);
            if (st <= 0.0) throw ConfigError("sweep: nprime_step must be positive");
            for (double v = lo; v <= hi + 1e-12; v += st) cfg.drive_nprime_values.push_back(v);
        }
        if (sw.contains("kinds")) {
            for (const auto& v : sw["kinds"]) {
                const auto k = parse_drive_kind(v.get<std::string>());
                if (!k) throw ConfigError("sweep: unknown drive kind");
                cfg.drive_kinds.push_back(*k);
            }
        }
    }
    if (cfg.drive_kinds.empty() && !cfg.scenario.is_pulse)
        cfg.drive_kinds.push_back(cfg.scenario.drive.kind);

    // Flag overrides, then freeze the hash over the effective configuration.
    if (flags.out) cfg.output = *flags.out;
    if (flags.seed) cfg.settings.quadrature.seed = *flags.seed;
    cfg.settings.jobs = 1;
    if (const char* env = std::getenv("ADIASCOPE_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) cfg.settings.jobs = j;
    }
    if (flags.jobs) cfg.settings.jobs = *flags.jobs;

    // Hash the physics-relevant configuration: the output path stays out so
    // identical runs to different files produce identical bytes.
    json effective = root;
    effective.erase("output");
    effective["quadrature"]["seed"] = cfg.settings.quadrature.seed;
    cfg.config_hash = fnv1a(effective.dump());
    return cfg;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string header_comment(std::uint64_t config_hash, std::uint64_t seed) {
    std::ostringstream os;
    os << "# adiascope " << kVersion << " config_hash=" << hex64(config_hash)
       << " seed=" << seed << "\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) throw ConfigError("cannot write output file " + path);
    out << content;
}

std::string matrix_row(const ComplexMatrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            os << ',' << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag());
    return os.str();
}

BuiltScenario build_from(const ScenarioConfig& sc) {
    return sc.is_pulse ? build_cp_scenario(sc.cp) : build_drive(sc.drive);
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

std::string sweep_csv(const SweepResult& result, std::uint64_t config_hash, std::uint64_t seed) {
    std::ostringstream os;
    os << header_comment(config_hash, seed);
    os << "sweep_var,kind,delta_u_err,residual,n_pulses_or_nprime,theta,seed\n";
    for (const SweepRow& r : result.rows) {
        os << format_number(r.sweep_var) << ',' << r.kind << ','
           << format_number(r.delta_u_err) << ',' << format_number(r.residual) << ','
           << format_number(r.n_pulses_or_nprime) << ',' << format_number(r.theta) << ','
           << r.seed << "\n";
    }
    return os.str();
}

int cmd_decompose(const std::string& config_path, const CommonFlags& flags) {
    return run_guarded([&] {
        const RunConfig cfg = load_config(config_path, flags);
        const BuiltScenario sc = build_from(cfg.scenario);
        const ScenarioOutcome out = evaluate_scenario(sc, cfg.settings);

        std::ostringstream os;
        os << header_comment(cfg.config_hash, cfg.settings.quadrature.seed);
        os << "record,name,data\n";
        const std::pair<const char*, const ComplexMatrix*> factors[] = {
            {"u_total", &out.decomp.u_total.m()}, {"u_dyn", &out.decomp.u_dyn.m()},
            {"u_g1", &out.decomp.u_g1.m()},       {"u_g2", &out.decomp.u_g2.m()},
            {"u_geo", &out.decomp.u_geo.m()},     {"u_err", &out.decomp.u_err.m()},
        };
        for (const auto& [name, m] : factors) os << "factor," << name << matrix_row(*m) << "\n";
        os << "metric,delta_u_err," << format_number(out.report.delta_u_err) << "\n";
        os << "metric,delta_u_err_stderr," << format_number(out.report.delta_u_err_stderr)
           << "\n";
        os << "metric,residual," << format_number(out.report.reconstruction_residual) << "\n";
        os << "metric,err_frobenius," << format_number(out.report.err_deviation_frobenius)
           << "\n";
        os << "metric,geo_eigenphase";
        for (double p : out.report.geo_eigenphases) os << ',' << format_number(p);
        os << "\nmetric,dynamic_phase";
        for (double p : out.report.dynamic_phase) os << ',' << format_number(p);
        os << "\n";
        write_file(cfg.output, os.str());
        std::cout << "decompose: delta_u_err=" << format_number(out.report.delta_u_err)
                  << " residual=" << format_number(out.report.reconstruction_residual) << " -> "
                  << cfg.output << "\n";
        return kExitOk;
    });
}

int cmd_sweep_cp(const std::string& config_path, const CommonFlags& flags) {
    return run_guarded([&] {
        const RunConfig cfg = load_config(config_path, flags);
        if (!cfg.scenario.is_pulse)
            throw ConfigError("sweep-cp needs a scenario of type \"cp\"");
        if (cfg.cp_n_values.empty()) throw ConfigError("sweep-cp: empty pulse-count range");
        const SweepResult res = sweep_cp(cfg.scenario.cp.theta, cfg.scenario.cp.phi0,
                                         cfg.scenario.cp.phiT, cfg.cp_n_values, cfg.settings);
        write_file(cfg.output, sweep_csv(res, cfg.config_hash, cfg.settings.quadrature.seed));
        std::cout << "sweep-cp: " << res.rows.size() << " rows -> " << cfg.output << "\n";
        return kExitOk;
    });
}

int cmd_sweep_drive(const std::string& config_path, const CommonFlags& flags) {
    return run_guarded([&] {
        const RunConfig cfg = load_config(config_path, flags);
        if (cfg.scenario.is_pulse)
            throw ConfigError("sweep-drive needs a scenario of type \"drive\"");
        if (cfg.drive_nprime_values.empty())
            throw ConfigError("sweep-drive: empty N' range");
        const SweepResult res =
            sweep_drive(cfg.drive_kinds, cfg.drive_nprime_values, cfg.scenario.drive.t_total,
                        cfg.scenario.drive.omega, cfg.scenario.drive.theta, cfg.settings);
        write_file(cfg.output, sweep_csv(res, cfg.config_hash, cfg.settings.quadrature.seed));
        std::cout << "sweep-drive: " << res.rows.size() << " rows -> " << cfg.output << "\n";
        return kExitOk;
    });
}

int cmd_gamma_solve(const CommonFlags& flags) {
    return run_guarded([&] {
        const double tol = flags.tol.value_or(1e-12);
        if (tol < 1e-12) throw ConfigError("gamma-solve: --tol must be >= 1e-12");
        const double g = solve_gamma(tol);
        std::cout << "gamma = " << format_number(g)
                  << " modulation_average = " << format_number(modulation_average_magnitude(g))
                  << "\n";
        return kExitOk;
    });
}

int cmd_modulation(const std::string& config_path, const CommonFlags& flags) {
    return run_guarded([&] {
        const RunConfig cfg = load_config(config_path, flags);
        const BuiltScenario sc = build_from(cfg.scenario);
        const ModulationTrace trace = modulation_trace(sc.field, cfg.modulation_samples);

        std::ostringstream os;
        os << header_comment(cfg.config_hash, cfg.settings.quadrature.seed);
        os << "t,pair,f_re,f_im\n";
        for (const ModulationSample& s : trace.samples) {
            os << format_number(s.t) << ',' << s.p.group << '_' << s.p.index << '|' << s.q.group
               << '_' << s.q.index << ',' << format_number(s.f.real()) << ','
               << format_number(s.f.imag()) << "\n";
        }
        write_file(cfg.output, os.str());
        std::cout << "modulation: " << trace.samples.size() << " samples -> " << cfg.output
                  << "\n";
        return kExitOk;
    });
}

}  // namespace adiascope::cli
