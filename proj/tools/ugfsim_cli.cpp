#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ugfsim/errors.hpp"
#include "ugfsim/runner.hpp"
#include "ugfsim/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitPhysicsFail = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ugf::ParseError("cannot open scenario file \"" + path + "\"");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ugf::Error("cannot open output file \"" + path + "\"");
    out << content;
}

struct CommonFlags {
    std::string out;
    std::string trajectories;
    std::string engine = "all";
    double dt = 0.0;
    double tol = 0.0;
    bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out, "CSV destination ('-' for stdout)");
    cmd->add_option("--trajectories", flags.trajectories,
                    "Write sampled arm/mirror trajectories to this CSV (interferometer runs)");
    cmd->add_option("--engine", flags.engine, "Phase engine selection")
        ->check(CLI::IsMember({"midpoint", "action", "perturbation", "all"}));
    cmd->add_option("--dt", flags.dt, "Integrator step override [s]");
    cmd->add_option("--tol", flags.tol, "Phase agreement tolerance override [rad]");
    cmd->add_flag("--quiet", flags.quiet, "Suppress the human-readable report");
}

ugf::Scenario load_scenario(const std::string& text, const CommonFlags& flags) {
    ugf::Scenario scenario = ugf::parse_scenario(text);
    bool changed = false;
    nlohmann::json doc = nlohmann::json::parse(scenario.document);
    if (flags.dt > 0.0) {
        doc["dt"] = flags.dt;
        changed = true;
    }
    if (flags.tol > 0.0) {
        doc["tolerances"]["phase"] = flags.tol;
        changed = true;
    }
    if (flags.engine != "all") {
        doc["engines"] = flags.engine;
        changed = true;
    }
    return changed ? ugf::parse_scenario(doc.dump()) : scenario;
}

int run_one(const ugf::Scenario& scenario, const CommonFlags& flags) {
    const ugf::RunReport report = ugf::run(scenario);
    if (!flags.quiet) std::cout << ugf::report_text(report);
    if (!flags.out.empty()) {
        write_output(flags.out, ugf::csv_header(report.kind) + "\n" + ugf::csv_row(report) + "\n");
    }
    if (!flags.trajectories.empty()) {
        write_output(flags.trajectories, ugf::trajectory_csv(scenario));
    }
    return report.pass ? kExitPass : kExitPhysicsFail;
}

int sweep_one(const ugf::Scenario& scenario, const CommonFlags& flags) {
    const ugf::SweepResult result = ugf::sweep(scenario);
    write_output(flags.out, result.csv);
    if (!flags.quiet && !flags.out.empty() && flags.out != "-") {
        std::cout << "sweep: " << result.rows << " rows -> " << flags.out << " ("
                  << (result.all_pass ? "all pass" : "failures present") << ")\n";
    }
    return result.all_pass ? kExitPass : kExitPhysicsFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atom-interferometer phase and clock-pair frequency-shift simulator"};
    app.require_subcommand(1);

    std::string run_file, sweep_file, preset_name, validate_file;
    CommonFlags run_flags, sweep_flags, preset_flags;

    CLI::App* cmd_run = app.add_subcommand("run", "Run a scenario file");
    cmd_run->add_option("file", run_file, "Scenario JSON document")->required();
    add_common_flags(cmd_run, run_flags);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a scenario's parameter sweep");
    cmd_sweep->add_option("file", sweep_file, "Scenario JSON document")->required();
    add_common_flags(cmd_sweep, sweep_flags);

    CLI::App* cmd_preset = app.add_subcommand("preset", "Run a built-in preset by name");
    cmd_preset->add_option("name", preset_name, "Preset name");
    add_common_flags(cmd_preset, preset_flags);
    bool preset_sweep = false;
    bool preset_list = false;
    cmd_preset->add_flag("--sweep", preset_sweep, "Run the preset's sweep instead of a single run");
    cmd_preset->add_flag("--list", preset_list, "List available presets and exit");

    CLI::App* cmd_validate = app.add_subcommand("validate", "Validate a scenario file");
    cmd_validate->add_option("file", validate_file, "Scenario JSON document")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            return run_one(load_scenario(read_file(run_file), run_flags), run_flags);
        }
        if (cmd_sweep->parsed()) {
            return sweep_one(load_scenario(read_file(sweep_file), sweep_flags), sweep_flags);
        }
        if (cmd_preset->parsed()) {
            if (preset_list) {
                for (const auto& name : ugf::preset_names()) std::cout << name << "\n";
                return kExitPass;
            }
            if (preset_name.empty() || !ugf::is_preset(preset_name)) {
                std::cerr << "error: unknown preset \"" << preset_name
                          << "\" (try: preset --list)\n";
                return kExitInputError;
            }
            const ugf::Scenario scenario =
                load_scenario(ugf::preset_document(preset_name), preset_flags);
            return preset_sweep ? sweep_one(scenario, preset_flags)
                                : run_one(scenario, preset_flags);
        }
        if (cmd_validate->parsed()) {
            ugf::parse_scenario(read_file(validate_file));
            std::cout << "OK\n";
            return kExitPass;
        }
    } catch (const ugf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ugf::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ugf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysicsFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysicsFail;
    }
    return kExitInputError;
}
