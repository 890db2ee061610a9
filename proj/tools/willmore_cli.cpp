// Command line front end: runs one experiment config and writes its outputs
// under <out>/<config-hash>/. On failure a machine-readable error JSON goes to
// stderr and the exit code is nonzero.

#include "willmore/cli_runner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Energy-stable parametric FEM for planar Willmore flow"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "Flat key=value config file")->required();
    run->add_option("--out", out_dir, "Output directory (default from config)");
    run->add_option("--jobs", jobs, "Worker pool size for sweep entries")->default_val(1);
    run->add_option("--override", overrides, "key=value overrides applied after the file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!out_dir.empty()) overrides.push_back("out=" + out_dir);
        const willmore::ExperimentConfig cfg = willmore::parse_config(config_path, overrides);
        const willmore::RunRecord rec = willmore::run_experiment(cfg, jobs);
        std::cout << rec.summary << "\n";
        std::cout << "outputs in " << rec.out_dir << " (" << rec.files.size() << " files)\n";
        return 0;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["config"] = config_path;
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
