#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbd/cli/commands.hpp"
#include "qbd/cli/config.hpp"

namespace {

using qbd::cli::json;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qbd::cli::ConfigError({"--config: cannot open " + path});
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw qbd::cli::ConfigError({std::string("--config: JSON parse error: ") + e.what()});
    }
    return doc;
}

struct SweepSpec {
    std::string key;
    double start = 0.0, stop = 0.0;
    int steps = 0;
};

SweepSpec parse_sweep(const std::string& text) {
    // KEY=start:stop:steps
    const auto eq = text.find('=');
    const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
        throw qbd::cli::ConfigError({"--sweep: expected KEY=start:stop:steps"});
    SweepSpec s;
    s.key = text.substr(0, eq);
    try {
        s.start = std::stod(text.substr(eq + 1, c1 - eq - 1));
        s.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        s.steps = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw qbd::cli::ConfigError({"--sweep: malformed numbers in " + text});
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qbd - Brownian motion in a quantum environment: simulation and analysis"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path, out_dir, sweep_text;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int threads = 0;

    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides config)");
    auto* thr_opt = app.add_option("--threads", threads, "worker threads (overrides config)");
    app.add_option("--sweep", sweep_text, "sweep spec KEY=start:stop:steps");

    const std::vector<std::string> commands{"noise",  "langevin",     "cutoff",  "dispersion",
                                            "kramers", "smoluchowski", "constants"};
    for (const auto& name : commands) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    seed_set = seed_opt->count() > 0;
    out_set = out_opt->count() > 0;
    const bool thr_set = thr_opt->count() > 0;
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        json doc = config_path.empty() ? json::object() : load_config_file(config_path);
        qbd::cli::RunConfig cfg = qbd::cli::parse_config(doc);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out_dir = out_dir;
        if (thr_set) cfg.threads = threads;
        if (!sweep_text.empty()) {
            const auto s = parse_sweep(sweep_text);
            cfg.sweep_key = s.key;
            cfg.sweep_start = s.start;
            cfg.sweep_stop = s.stop;
            cfg.sweep_steps = s.steps;
            if (cfg.sweep_key != "theta" && cfg.sweep_key != "omega")
                throw qbd::cli::ConfigError({"--sweep: key must be theta or omega"});
            if (!(cfg.sweep_start > 0.0) || !(cfg.sweep_stop > cfg.sweep_start) ||
                cfg.sweep_steps < 2)
                throw qbd::cli::ConfigError({"--sweep: need 0 < start < stop and steps >= 2"});
        }
        if (cfg.out_dir.empty()) {
            const char* root = std::getenv("QBD_OUT_ROOT");
            cfg.out_dir = (root ? std::string(root) : std::string("runs")) + "/" + command;
        }

        int rc = 1;
        if (command == "noise") rc = qbd::cli::cmd_noise(cfg);
        else if (command == "langevin") rc = qbd::cli::cmd_langevin(cfg);
        else if (command == "cutoff") rc = qbd::cli::cmd_cutoff(cfg);
        else if (command == "dispersion") rc = qbd::cli::cmd_dispersion(cfg);
        else if (command == "kramers") rc = qbd::cli::cmd_kramers(cfg);
        else if (command == "smoluchowski") rc = qbd::cli::cmd_smoluchowski(cfg);
        else if (command == "constants") rc = qbd::cli::cmd_constants(cfg);

        if (rc == 0)
            std::cout << command << ": ok (" << cfg.out_dir << ")\n";
        else
            std::cerr << command << ": declared checks failed, see " << cfg.out_dir
                      << "/manifest.json\n";
        return rc;
    } catch (const qbd::cli::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << command << ": numerical failure: " << e.what() << "\n";
        return 2;
    }
}
