#include "vblind/error.hpp"
#include "vblind/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace vblind;

int main(int argc, char** argv) {
    CLI::App app{"Venetian blind constructions: build, verify and analyse"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "run", checks = "all", mode = "measure_zero";
    std::optional<std::uint64_t> seed;
    int stage = -1;

    auto* construct = app.add_subcommand("construct", "build all stages and write the run directory");
    construct->add_option("--config", config_path, "config file")->required();
    construct->add_option("--out", out_dir, "output directory");
    construct->add_option("--seed", seed, "override the config seed");

    auto* analyze = app.add_subcommand("analyze", "run analysis checks on a run directory");
    analyze->add_option("--out", out_dir, "run directory")->required();
    analyze->add_option("--checks", checks, "recursion,wk,boxdim,series,balls,energy or all");
    analyze->add_option("--seed", seed, "override the config seed");

    auto* planes = app.add_subcommand("planes", "build and verify a plane family");
    planes->add_option("--out", out_dir, "run directory")->required();
    planes->add_option("--mode", mode, "measure_zero, dimension or dual");

    auto* exp = app.add_subcommand("export", "write the vertices of one stage as CSV");
    exp->add_option("--out", out_dir, "run directory")->required();
    exp->add_option("--stage", stage, "stage index")->required();
    std::string export_to;
    exp->add_option("--to", export_to, "output file or directory (default: the run directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::ConfigFailure);
    }

    try {
        CommandResult r;
        if (*construct) {
            RunConfig cfg = load_config(config_path);
            if (seed) cfg.seed = *seed;
            r = cmd_construct(cfg, out_dir);
        } else if (*analyze) {
            r = cmd_analyze(out_dir, parse_checks(checks), seed);
        } else if (*planes) {
            r = cmd_planes(out_dir, mode);
        } else {
            r = cmd_export(out_dir, stage, std::filesystem::path(export_to.empty() ? out_dir : export_to));
        }
        (r.code == ExitCode::Ok ? std::cout : std::cerr) << r.message << '\n';
        return static_cast<int>(r.code);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(exit_code_for(e.code()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ConstructionFailure);
    }
}
