#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lbp/configuration.hpp"
#include "lbp/rate_model.hpp"

namespace lbp {

// Exact generator of the birth process restricted to sites [-L, L] with
// everything outside frozen empty. States are occupancy vectors indexed in
// mixed radix (site -L is the least significant digit). The all-saturated
// state is absorbing.
struct TruncatedChain {
    int32_t window_radius = 0;  // L
    int32_t cap = 1;
    std::shared_ptr<const RateModel> model;
    size_t state_count = 0;

    struct Transition {
        uint32_t from;
        uint32_t to;
        double rate;
    };
    std::vector<Transition> transitions;
    std::vector<double> exit_rate;
    double uniformization_rate = 0.0;  // max exit rate

    int32_t sites() const { return 2 * window_radius + 1; }
    size_t index_of(const Configuration& config) const;  // must be supported in [-L, L]
    Configuration config_of(size_t index) const;
};

TruncatedChain build_truncation(std::shared_ptr<const RateModel> model, int32_t window_radius,
                                uint64_t state_budget = 2'000'000);

struct OracleResult {
    double time = 0.0;
    std::vector<double> distribution;    // over state indices; sums to 1 within tol
    std::vector<double> mean_occupancy;  // per site, index site + L
    std::vector<double> occupancy_second_moment;
    std::vector<double> tip_law;  // P(tip == site), index site + L
    double p_empty = 0.0;
    double mean_tip = 0.0;  // empty states contribute 0
    double tip_second_moment = 0.0;
    double mean_mass = 0.0;
    double mass_second_moment = 0.0;

    double occupancy_variance(size_t i) const {
        return occupancy_second_moment[i] - mean_occupancy[i] * mean_occupancy[i];
    }
    double tip_variance() const { return tip_second_moment - mean_tip * mean_tip; }
    double mass_variance() const { return mass_second_moment - mean_mass * mean_mass; }
};

// Transient distribution at time t via uniformization; the Poisson-weight
// truncation keeps the total-variation defect below tol.
OracleResult transient(const TruncatedChain& chain, const Configuration& initial, double t,
                       double tol);
OracleResult transient_from(const TruncatedChain& chain, std::vector<double> initial_distribution,
                            double t, double tol);

// Tail bound on the probability that the front reaches the window edge by
// time t: P(Poisson(rate_upper * sites * t) >= ceil(L / range)). Diagnostic
// for comparisons between the unrestricted process and the truncation.
double boundary_risk_bound(const TruncatedChain& chain, double t, double rate_upper);

// Golden-file round trip: one metadata comment line, then
// "state_index,probability" rows.
void write_golden(const std::string& path, const std::string& metadata,
                  std::span<const double> distribution);
struct GoldenFile {
    std::string metadata;
    std::vector<double> distribution;
};
GoldenFile read_golden(const std::string& path);

}  // namespace lbp
