#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbp/simulator.hpp"

namespace lbp {

struct MartingalePoint {
    double time = 0.0;
    double value = 0.0;  // X_t minus the integrated drift
};

// Tip position minus the integrated drift at every checkpoint. Needs the
// recorded integrals; throws MissingDataError on a checkpoint-less trajectory.
std::vector<MartingalePoint> martingale_residual(const Trajectory& traj);

struct QuadraticVariationPoint {
    double time = 0.0;
    double realized = 0.0;    // sum of squared tip jumps up to time
    double predicted = 0.0;   // integrated second-moment rate
};

std::vector<QuadraticVariationPoint> quadratic_variation(const Trajectory& traj);

struct SpeedEstimate {
    double lambda_hat = 0.0;  // sites per unit time
    double t1 = 0.0;
    double t2 = 0.0;
    int n_replicas = 0;
    double std_error = 0.0;
    std::vector<double> per_run;
};

// Mean of (X(t2) - X(t1)) / (t2 - t1) over trajectories; both times must be
// checkpointed. Early evolution is excluded by choosing t1 > 0.
SpeedEstimate speed_estimate(std::span<const Trajectory> trajectories, double t1, double t2);

// Same for the leftmost occupied site, with the sign flipped so that a
// leftward-spreading front has positive speed.
SpeedEstimate left_edge_speed_estimate(std::span<const Trajectory> trajectories, double t1,
                                       double t2);

struct ErgodicityReport {
    std::vector<double> entry_times;    // renewal-state entries after burn-in
    std::vector<double> return_times;   // gaps between consecutive entries
    std::vector<double> excursion_qv;   // realized quadratic variation per excursion
    std::vector<std::pair<SeenFromTip, double>> occupation;  // sojourn-time frequencies
    double f_time_average = 0.0;  // integrated drift over the window, per unit time
    double mean_return_time = 0.0;
    bool insufficient_excursions = false;
};

// Renewal statistics of the seen-from-tip chain. The renewal state is the
// single-entry value (tip occupied, nothing above the truncation block).
// Requires alpha recorded at events and checkpoints at/after burn_in.
ErgodicityReport ergodicity_report(const Trajectory& traj, double burn_in);

std::string ergodicity_occupation_csv(const ErgodicityReport& report);
std::string ergodicity_return_times_csv(const ErgodicityReport& report);

struct HittingTimes {
    std::vector<int64_t> sites;
    std::vector<double> sigma;  // first time within range of an occupied site
    std::vector<double> tau;    // first occupation time
};

HittingTimes hitting_times(const Trajectory& traj, std::span<const int64_t> sites);

struct FluctuationReport {
    double time = 0.0;
    double lambda_hat = 0.0;
    int n = 0;
    double residual_mean = 0.0;  // of X_t - lambda_hat * t
    double residual_std = 0.0;
    std::vector<double> q_grid;      // thresholds for |X_t - lambda t| / sqrt(t)
    std::vector<int64_t> tail_counts;
    std::vector<double> tail_freq;
    double log_tail_slope_q2 = 0.0;  // LS slope of log tail frequency vs q^2
    double rel_deviation_threshold = 0.0;
    double rel_deviation_prob = 0.0;  // P(|X_t/t - lambda| >= threshold * lambda)
};

FluctuationReport fluctuation_stats(std::span<const Trajectory> trajectories, double t,
                                    double lambda_hat, double q_step = 0.25,
                                    double rel_deviation = 0.1);

std::string fluctuation_histogram_csv(const FluctuationReport& report);

}  // namespace lbp
