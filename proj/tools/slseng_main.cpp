#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slseng/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"stochastic-geometry engine for spatially-aware secondary license sharing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool no_mc = false;

    const char* kinds[] = {"map-grid",         "af-sweep", "primary-coverage",
                           "secondary-coverage", "typical-coverage", "rho-select",
                           "validate",         "mean-interference"};
    for (const char* kind : kinds) {
        CLI::App* sub = app.add_subcommand(kind);
        sub->add_option("--config", config_path, "configuration file (key=value or JSON)");
        sub->add_option("--out", out_path, "CSV output path");
        sub->add_option("--seed", seed, "Monte-Carlo seed")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--threads", threads, "worker pool size (0 = hardware)");
        sub->add_flag("--no-mc", no_mc, "skip the Monte-Carlo columns");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        slseng::LoadedConfig cfg = config_path.empty()
                                       ? slseng::parse_config("")
                                       : slseng::load_config(config_path);
        cfg.spec.kind = slseng::parse_kind(app.get_subcommands().front()->get_name());
        if (!out_path.empty()) cfg.spec.out_path = out_path;
        if (seed_set) cfg.mc.seed = seed;
        if (threads > 0) {
            cfg.spec.threads = threads;
            cfg.mc.threads = threads;
        }
        if (no_mc) cfg.spec.with_mc = false;

        const slseng::RunResult result = slseng::run_experiment(cfg);
        std::cout << result.summary << "\n";
        return result.exit_code;
    } catch (const slseng::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
