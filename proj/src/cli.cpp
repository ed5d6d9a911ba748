#include "kac/cli.hpp"

#include "kac/errors.hpp"
#include "kac/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

namespace kac::cli {

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool assert_pass = false;
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "replica rows format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", flags.seed, "master seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_flag("--assert", flags.assert_pass,
                  "exit 4 when any acceptance threshold fails");
}

int execute(const std::string& name, const CommonFlags& flags,
            const std::function<RunRecord(const ExperimentConfig&)>& runner) {
    ExperimentConfig cfg = default_config(name);
    if (!flags.config_path.empty()) cfg = parse_config_file(flags.config_path, cfg);
    if (flags.seed_set) cfg.seed = flags.seed;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.format.empty()) cfg.format = flags.format;
    cfg.assert_pass = flags.assert_pass;

    const RunRecord rec = runner(cfg);
    write_run(rec, cfg.out_dir, cfg.format);

    for (const auto& line : rec.checks) std::cout << line << "\n";
    for (const auto& [key, value] : rec.scalars)
        std::cout << "  " << key << " = " << value << "\n";
    std::cout << (rec.pass ? "OK" : "THRESHOLD VIOLATION") << " (" << rec.experiment << ", "
              << rec.wall_ms / 1000.0 << " s, results in " << cfg.out_dir << ")\n";
    if (!rec.pass && cfg.assert_pass) return 4;
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"thermostated Kac model with global energy rescaling: "
                 "simulator, spectral solver, and experiment harness"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, std::function<RunRecord(const ExperimentConfig&)>>>
        commands = {
            {"simulate", {"run one trajectory and export snapshots", run_simulate}},
            {"contract", {"coupled-pair contraction rate vs G_N*mu", run_contraction}},
            {"energy", {"energy identities (exact, mean-field, solver)", run_energy_identity}},
            {"poc", {"propagation-of-chaos sweep over N", run_poc_sweep}},
            {"equilibrate", {"W2 decay towards the equilibrium", run_equilibration}},
            {"phase", {"smoothness phase diagram and closed-form cross-checks", run_phase_diagram}},
            {"moments", {"moment threshold r* and heavy-tail growth", run_moment_threshold}},
            {"sphere", {"sphere scaling: coupling identity and chaoticity rate", run_sphere_chaos}},
            {"genchk", {"generator pairing convergence to the limit form", run_generator_check}},
            {"kbar", {"rescaling constants: N-scaled boundedness", run_kbar_check}},
            {"stationary", {"solve the equilibrium transform and export it", run_stationary}},
        };

    std::map<std::string, CommonFlags> flags;
    for (const auto& [name, meta] : commands) {
        CLI::App* cmd = app.add_subcommand(name, meta.first);
        attach_common(cmd, flags[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (const auto& [name, meta] : commands)
            if (app.got_subcommand(name)) return execute(name, flags[name], meta.second);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace kac::cli
