#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbp/rate_model.hpp"
#include "lbp/tip_stats.hpp"

namespace lbp {

// Plain-text key = value configuration driving the command-line runs.
// Unknown keys are rejected. Defaults describe the stock study: cap 3,
// box dispersal of radius 3, establishment/fecundity shapes 0.5 1 0.5.
struct ExperimentConfig {
    // model
    std::string model = "fec_est";  // fec_est | free_branching
    int32_t cap = 3;
    int32_t a_radius = 3;
    std::vector<double> a_weights = {1, 1, 1, 1, 1, 1, 1};
    int32_t phi_radius = 1;
    std::vector<double> phi_weights = {0.5, 1.0, 0.5};
    int32_t psi_radius = 1;
    std::vector<double> psi_weights = {0.5, 1.0, 0.5};
    double c_fec = 0.5;
    double c_est = 0.5;

    // schedule
    double t1 = 100.0;
    double t2 = 1000.0;
    double checkpoint_dt = 10.0;

    // replication
    int replicas = 50;
    uint64_t base_seed = 20240809;
    int parallelism = 0;  // 0 = hardware concurrency

    // sweep
    std::string sweep_mode = "random";  // random | grid
    int sweep_count = 100;

    // curve
    int curve_points = 11;
    double curve_c_fec = 1.0;

    // trajectories
    int trajectory_runs = 10;

    // fluctuations
    std::vector<double> fluct_times = {100, 400, 1600};
    int fluct_replicas = 400;
    int lambda_replicas = 100;
    double q_step = 0.25;
    double rel_deviation = 0.1;

    // validation
    int32_t oracle_L = 3;
    double oracle_t = 0.5;
    double oracle_tol = 1e-10;
    int oracle_replicas = 10000;
    std::vector<double> martingale_times = {10, 50};
    int martingale_replicas = 1000;
    int64_t condition_trials = 100000;
    double z_limit = 3.0;

    // output
    std::string out_dir = ".";

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);
    void validate() const;
};

// Model described by the config; c_fec/c_est may be overridden per point.
std::shared_ptr<const RateModel> make_model(const ExperimentConfig& config);
std::shared_ptr<const RateModel> make_model(const ExperimentConfig& config, double c_fec,
                                            double c_est);

// Per-point seed: mixes the base seed with the parameter pair, so that
// identical (c_fec, c_est) pairs reproduce identical rows.
uint64_t point_seed(uint64_t base_seed, double c_fec, double c_est);

struct SweepRow {
    double c_fec = 0.0;
    double c_est = 0.0;
    double speed = 0.0;
    double std_error = 0.0;
};

std::vector<std::pair<double, double>> sweep_pairs(const ExperimentConfig& config);
std::vector<SweepRow> run_sweep_pairs(const ExperimentConfig& config,
                                      std::span<const std::pair<double, double>> pairs);
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::string sweep_csv(std::span<const SweepRow> rows);

struct CurveRow {
    double c_est = 0.0;
    double speed = 0.0;
    double std_error = 0.0;
};

std::vector<CurveRow> run_curve(const ExperimentConfig& config);
std::string curve_csv(std::span<const CurveRow> rows);

struct TrajectoriesResult {
    std::vector<Trajectory> runs;
};

TrajectoriesResult run_trajectories(const ExperimentConfig& config);
std::string trajectories_csv(const TrajectoriesResult& result);
std::string trajectories_svg(const TrajectoriesResult& result);

struct FluctResult {
    double lambda_hat = 0.0;
    double lambda_std_error = 0.0;
    std::vector<FluctuationReport> reports;  // one per requested time
};

FluctResult run_fluct(const ExperimentConfig& config);
std::string fluct_tail_csv(const FluctResult& result);

struct ValidationOutcome {
    struct Check {
        std::string name;
        bool passed = false;
        std::string detail;
    };
    std::vector<Check> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Oracle-vs-simulator suite, martingale suite, and condition checks for the
// configured model. model_override substitutes the model under test (used to
// exercise failure paths).
ValidationOutcome run_validate(const ExperimentConfig& config,
                               std::shared_ptr<const RateModel> model_override = nullptr);
std::string validation_text(const ValidationOutcome& outcome);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace lbp
