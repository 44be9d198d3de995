#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "lbp/errors.hpp"
#include "lbp/experiment.hpp"
#include "lbp/tip_stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 2;

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    bool has_seed = false;
    uint64_t seed = 0;
    int replicas = -1;
    int parallelism = -1;
};

lbp::ExperimentConfig load_config(const CliOverrides& cli) {
    lbp::ExperimentConfig cfg;
    if (!cli.config_path.empty()) cfg = lbp::ExperimentConfig::parse_file(cli.config_path);
    if (cli.has_seed) cfg.base_seed = cli.seed;
    if (cli.replicas > 0) cfg.replicas = cli.replicas;
    if (cli.parallelism >= 0) cfg.parallelism = cli.parallelism;
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    cfg.validate();
    return cfg;
}

std::string out_path(const lbp::ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void note(const std::string& path) { std::printf("wrote %s\n", path.c_str()); }

int cmd_sweep(const lbp::ExperimentConfig& cfg) {
    const auto rows = lbp::run_sweep(cfg);
    const auto path = out_path(cfg, "sweep.csv");
    lbp::write_text_file(path, lbp::sweep_csv(rows));
    note(path);
    return kExitOk;
}

int cmd_curve(const lbp::ExperimentConfig& cfg) {
    const auto rows = lbp::run_curve(cfg);
    const auto path = out_path(cfg, "curve.csv");
    lbp::write_text_file(path, lbp::curve_csv(rows));
    note(path);
    return kExitOk;
}

int cmd_trajectories(const lbp::ExperimentConfig& cfg) {
    const auto result = lbp::run_trajectories(cfg);
    const auto csv_path = out_path(cfg, "trajectories.csv");
    lbp::write_text_file(csv_path, lbp::trajectories_csv(result));
    note(csv_path);
    const auto svg_path = out_path(cfg, "trajectories.svg");
    lbp::write_text_file(svg_path, lbp::trajectories_svg(result));
    note(svg_path);
    return kExitOk;
}

int cmd_fluct(const lbp::ExperimentConfig& cfg) {
    const auto result = lbp::run_fluct(cfg);
    for (const auto& report : result.reports) {
        char name[64];
        std::snprintf(name, sizeof(name), "fluct_hist_t%g.csv", report.time);
        const auto path = out_path(cfg, name);
        lbp::write_text_file(path, "# schema: lbp.fluct-hist.v1\n" +
                                       lbp::fluctuation_histogram_csv(report));
        note(path);
    }
    const auto path = out_path(cfg, "fluct_tail.csv");
    lbp::write_text_file(path, lbp::fluct_tail_csv(result));
    note(path);
    return kExitOk;
}

int cmd_validate(const lbp::ExperimentConfig& cfg) {
    const auto outcome = lbp::run_validate(cfg);
    std::fputs(lbp::validation_text(outcome).c_str(), stdout);
    return outcome.ok() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-driven simulator and analysis toolkit for one-dimensional "
                 "lattice birth processes"};
    app.require_subcommand(1);

    CliOverrides cli;
    app.add_option("--config", cli.config_path, "Key = value configuration file");
    app.add_option("--out-dir", cli.out_dir, "Output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", cli.seed, "Base seed (overrides config)");
    app.add_option("--replicas", cli.replicas, "Replicas per point (overrides config)");
    app.add_option("--parallelism", cli.parallelism,
                   "Worker threads; 0 = hardware (overrides config)");

    app.add_subcommand("sweep", "Speed over (c_fec, c_est) pairs")->fallthrough();
    app.add_subcommand("curve", "Speed as a function of c_est at fixed c_fec")->fallthrough();
    app.add_subcommand("trajectories", "Tip paths of independent runs (CSV + SVG)")
        ->fallthrough();
    app.add_subcommand("fluct", "Tip fluctuation histograms and tail report")->fallthrough();
    app.add_subcommand("validate", "Oracle, martingale and rate-contract checks")->fallthrough();

    CLI11_PARSE(app, argc, argv);
    cli.has_seed = seed_opt->count() > 0;

    try {
        const lbp::ExperimentConfig cfg = load_config(cli);
        const std::string verb = app.get_subcommands().front()->get_name();
        if (verb == "sweep") return cmd_sweep(cfg);
        if (verb == "curve") return cmd_curve(cfg);
        if (verb == "trajectories") return cmd_trajectories(cfg);
        if (verb == "fluct") return cmd_fluct(cfg);
        if (verb == "validate") return cmd_validate(cfg);
        std::fprintf(stderr, "unknown command\n");
        return kExitBadConfig;
    } catch (const lbp::ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
