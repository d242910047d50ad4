#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sawphoton/commands.hpp"

namespace {

using sawphoton::io::RunConfig;

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed,
                      std::optional<int> shards) {
    RunConfig config =
        path.empty() ? RunConfig{} : sawphoton::io::parse_config_file(path);
    if (seed) config.run.seed = *seed;
    if (shards) {
        config.run.shards = *shards;
        config.validate();
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAW-driven single-photon source: design calculator and Monte Carlo simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string grid_path;
    double epsilon = 1e-6;
    std::optional<std::uint64_t> seed;
    std::optional<int> shards;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration (defaults used if omitted)");
    };

    CLI::App* analytic = app.add_subcommand("analytic", "closed-form device report (JSON to stdout)");
    add_config(analytic);
    analytic->add_option("--epsilon", epsilon, "bad-cycle probability target");

    CLI::App* simulate = app.add_subcommand("simulate", "run the stochastic pipeline; write CSV + summary");
    add_config(simulate);
    simulate->add_option("--out", out_dir, "output directory")->required();
    simulate->add_option("--seed", seed, "override config run.seed");
    simulate->add_option("--shards", shards, "override config run.shards");

    CLI::App* design = app.add_subcommand("design", "accuracy budget report (JSON to stdout)");
    add_config(design);
    design->add_option("--epsilon", epsilon, "bad-cycle probability target");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep driven by a grid file");
    add_config(sweep);
    sweep->add_option("grid", grid_path, "JSON grid file")->required();
    sweep->add_option("--out", out_dir, "output directory for sweep.csv")->required();
    sweep->add_option("--epsilon", epsilon, "bad-cycle probability target");

    app.add_subcommand("verify", "check every closed-form number against its published value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analytic->parsed()) {
            const RunConfig config = load_config(config_path, seed, shards);
            std::cout << sawphoton::io::analytic_report(config, epsilon).dump(2) << '\n';
        } else if (simulate->parsed()) {
            const RunConfig config = load_config(config_path, seed, shards);
            sawphoton::io::simulate_to_directory(config, out_dir);
        } else if (design->parsed()) {
            const RunConfig config = load_config(config_path, seed, shards);
            std::cout << sawphoton::io::design_report(config, epsilon).dump(2) << '\n';
        } else if (sweep->parsed()) {
            const RunConfig config = load_config(config_path, seed, shards);
            const auto request = sawphoton::io::parse_grid_file(grid_path);
            std::filesystem::create_directories(out_dir);
            sawphoton::io::sweep_to_csv(config, request,
                                        std::filesystem::path(out_dir) / "sweep.csv", epsilon);
        } else {  // verify
            if (!sawphoton::io::verify_paper_numbers(std::cout))
                return sawphoton::io::kExitVerifyFailure;
        }
    } catch (const sawphoton::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sawphoton::io::kExitConfigError;
    } catch (const std::logic_error& e) {
        // domain/invalid-argument failures are bad user parameters
        std::cerr << "error: " << e.what() << '\n';
        return sawphoton::io::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sawphoton::io::kExitRuntimeError;
    }
    return sawphoton::io::kExitOk;
}
