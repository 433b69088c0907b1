// Command-line front end: config-driven scenario runs, grid sweeps and the
// analytic-oracle self check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "sideband/csv.hpp"
#include "sideband/verify.hpp"

namespace fs = std::filesystem;
using namespace sideband;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunConfig load_config(const std::string& config_path, const std::string& out_override,
                      int samples_override) {
    RunConfig cfg = parse_config(config_path.empty() ? std::string{} : read_file(config_path));
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (samples_override > 0) {
        if (samples_override < 2) throw ValidationError("samples must be >= 2");
        cfg.samples = samples_override;
    }
    return cfg;
}

void note(bool quiet, const std::string& msg) {
    if (!quiet) std::cout << msg << "\n";
}

void write_scenario(const ScenarioResult& res, const RunConfig& cfg, const fs::path& dir,
                    const std::string& series_name, const std::string& table_name,
                    bool quiet) {
    emit_series(res, cfg, dir / series_name);
    note(quiet, "wrote " + (dir / series_name).string());
    if (!table_name.empty()) {
        emit_table(res.table, cfg, dir / table_name);
        note(quiet, "wrote " + (dir / table_name).string());
    }
    emit_summary(res.summary, res.scenario_id, dir / "summary.json");
    note(quiet, "wrote " + (dir / "summary.json").string());
}

int dispatch(const RunConfig& cfg, bool quiet) {
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());

    switch (cfg.scenario) {
        case ScenarioKind::fig1: {
            const Fig1Result res = run_fig1(cfg.physics, cfg.samples);
            emit_series(res.rwa, cfg, dir / "series_rwa.csv");
            emit_series(res.full, cfg, dir / "series_full.csv");
            emit_series(res.analytic, cfg, dir / "series_analytic.csv");
            note(quiet, "wrote " + (dir / "series_{rwa,full,analytic}.csv").string());
            std::map<std::string, double> summary = res.rwa.summary;
            for (const auto& [k, v] : res.full.summary) summary["full_" + k] = v;
            emit_summary(summary, "fig1", dir / "summary.json");
            note(quiet, "wrote " + (dir / "summary.json").string());
            return 0;
        }
        case ScenarioKind::fig2: {
            const ScenarioResult res =
                run_fig2(fig2_alpha_grid(cfg), fig2_phi_grid(cfg), cfg.physics, cfg.samples);
            write_scenario(res, cfg, dir, "series.csv", "transfer.csv", quiet);
            return 0;
        }
        case ScenarioKind::detuning: {
            const ScenarioResult res =
                run_detuning_sweep(detuning_grid(cfg), cfg.physics, cfg.generator,
                                   cfg.samples);
            write_scenario(res, cfg, dir, "series.csv", "detuning.csv", quiet);
            return 0;
        }
        case ScenarioKind::leakage: {
            const ScenarioResult res = run_leakage_scaling(leakage_grid(cfg), cfg.physics,
                                                           Generator::Full, cfg.samples);
            write_scenario(res, cfg, dir, "series.csv", "leakage.csv", quiet);
            return 0;
        }
        case ScenarioKind::bloch_siegert: {
            const ScenarioResult res = run_bloch_siegert(bloch_siegert_grid(cfg), cfg.physics,
                                                         Generator::Full, cfg.samples);
            write_scenario(res, cfg, dir, "series.csv", "bloch_siegert.csv", quiet);
            return 0;
        }
        case ScenarioKind::custom: {
            const ScenarioResult res = run_custom(cfg.physics, cfg.generator, cfg.samples);
            write_scenario(res, cfg, dir, "series.csv", "", quiet);
            return 0;
        }
    }
    return 1;
}

bool is_sweep_scenario(ScenarioKind s) {
    return s == ScenarioKind::fig2 || s == ScenarioKind::detuning ||
           s == ScenarioKind::leakage || s == ScenarioKind::bloch_siegert;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kProgramName) + " v" + std::string(kVersion) +
                 " - heralded electron-pair entanglement transfer simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int samples = 0;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output");

    CLI::App* run = app.add_subcommand("run", "run the scenario named in the config");
    run->add_option("--config", config_path, "config file (key = value lines)")->required();
    run->add_option("--out", out_dir, "output directory (overrides output_dir)");
    run->add_option("--samples", samples, "time samples (overrides samples)");

    CLI::App* sweep = app.add_subcommand("sweep", "run a grid scenario from the config");
    sweep->add_option("--config", config_path, "config file (key = value lines)")->required();
    sweep->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sweep->add_option("--samples", samples, "time samples (overrides samples)");

    CLI::App* verify = app.add_subcommand("verify", "run the analytic-oracle self checks");
    verify->add_option("--config", config_path, "optional config overriding the defaults");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_path, out_dir, samples);
        if (sweep->parsed() && !is_sweep_scenario(cfg.scenario))
            throw ValidationError(
                "sweep expects a grid scenario (fig2|detuning|leakage|bloch_siegert)");
        if (run->parsed() || sweep->parsed()) return dispatch(cfg, quiet);

        const std::vector<CheckResult> checks = run_verification(cfg);
        bool all = true;
        for (const CheckResult& c : checks) {
            all = all && c.pass;
            std::printf("[%s] %-24s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                        c.detail.c_str());
        }
        std::printf("%s\n", all ? "verification passed" : "verification FAILED");
        return all ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
