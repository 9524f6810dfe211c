#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"
#include "wgqed/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string preset;
    std::string out;
    std::vector<std::string> formats;
    unsigned threads = 0;
};

wgqed::cli::RunConfig build_config(wgqed::cli::Command command, const Options& o) {
    using namespace wgqed::cli;
    if (!o.config.empty() && !o.preset.empty()) {
        throw wgqed::ConfigError("--config and --preset are mutually exclusive");
    }
    RunConfig cfg;
    if (!o.preset.empty()) {
        cfg = preset(o.preset);
        if (cfg.command != command) {
            throw wgqed::ConfigError("preset '" + o.preset + "' belongs to the '" +
                                     to_string(cfg.command) + "' command");
        }
    } else if (!o.config.empty()) {
        cfg = config_from_json(read_config_file(o.config), command);
    } else {
        cfg = config_from_json(nlohmann::json::object(), command);
    }
    if (!o.out.empty()) cfg.output.dir = o.out;
    if (!o.formats.empty()) cfg.output.formats = o.formats;
    if (o.threads > 0) cfg.threads = o.threads;
    // Re-validate after overrides.
    return config_from_json(to_json(cfg), command);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wgqed::cli;
    CLI::App app{"Two-photon scattering off a cavity with a two-level system in a waveguide"};
    app.require_subcommand(1);
    Options opts;
    std::vector<std::pair<Command, CLI::App*>> subs;
    const std::pair<Command, const char*> commands[] = {
        {Command::spectrum, "dressed spectrum for n = 1 .. n_max"},
        {Command::single, "single-photon reflection and transmission"},
        {Command::wavefunction, "two-photon outgoing wavefunctions"},
        {Command::fluorescence, "two-photon background fluorescence maps"},
        {Command::g2, "second-order coherence sweeps and curves"},
        {Command::oracle_check, "closed form against the independent oracles"},
    };
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(to_string(cmd), help);
        sub->add_option("--config", opts.config, "JSON run config");
        sub->add_option("--preset", opts.preset, "named preset")
            ->check(CLI::IsMember(preset_names()));
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--format", opts.formats, "csv,json[,plot]")->delimiter(',');
        sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
        subs.emplace_back(cmd, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        Command command = Command::spectrum;
        for (const auto& [cmd, sub] : subs) {
            if (sub->parsed()) command = cmd;
        }
        const RunConfig cfg = build_config(command, opts);
        const RunResult result = run_command(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& f : result.files) std::cout << f << "\n";
        if (result.exit_code == 4) std::cerr << "oracle check FAILED; see oracle_report.json\n";
        return result.exit_code;
    } catch (const wgqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wgqed::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
