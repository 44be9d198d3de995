#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbp/configuration.hpp"
#include "lbp/fenwick.hpp"
#include "lbp/rate_model.hpp"
#include "lbp/rng.hpp"

namespace lbp {

struct ModelInfo {
    std::string description;
    int32_t range = 1;
    int32_t cap = 1;
};

struct Event {
    double time = 0.0;
    int64_t site = 0;
    int64_t tip_after = 0;
};

struct Checkpoint {
    double time = 0.0;
    int64_t tip = 0;       // rightmost occupied site
    int64_t leftmost = 0;  // leftmost occupied site
    int64_t mass = 0;
    double int_f = 0.0;  // integrated tip drift rate since simulation start
    double int_g = 0.0;  // integrated tip second-moment rate
    std::optional<SeenFromTip> alpha;
};

struct RecordOptions {
    bool alpha_at_checkpoints = false;
    bool alpha_at_events = false;
};

// Event log plus checkpointed observables of one run segment. Event times
// are strictly increasing; the tip is nondecreasing.
struct Trajectory {
    std::vector<Event> events;
    std::vector<Checkpoint> checkpoints;
    std::vector<SeenFromTip> alpha_at_events;  // parallel to events when recorded
    uint64_t seed = 0;
    ModelInfo model;
    Configuration initial{1};      // state at the start of the segment
    Configuration final_state{1};  // state at end_time
    double start_time = 0.0;
    double end_time = 0.0;

    // header: t,X,Y,mass,int_f,int_g
    std::string to_csv() const;
    // header: t,site
    std::string events_to_csv() const;
};

struct SimOptions {
    // Full refresh of all cached rates every this many events.
    uint64_t exact_recompute_interval = 4096;
};

// Exact event-driven realization of the birth process: exponential waiting
// times from the total rate, site selection proportional to individual
// rates, incremental rate updates over the model's dependence range.
class Simulation {
public:
    Simulation(std::shared_ptr<const RateModel> model, Configuration initial, uint64_t seed,
               SimOptions options = {});

    // One jump. Throws FrozenStateError when the total rate is zero.
    Event step();

    // Advances to t_end, recording a checkpoint at the current time, at each
    // listed time (ascending, within (now, t_end]) and integrating the drift
    // functionals exactly between events. An event falling exactly on a
    // checkpoint time applies first. A frozen state is absorbing here.
    Trajectory run_until(double t_end, std::span<const double> checkpoint_times,
                         const RecordOptions& record = {});

    const RateModel& model() const { return *model_; }
    const Configuration& config() const { return config_; }
    double time() const { return time_; }
    double total_rate() const { return total_; }
    uint64_t event_count() const { return events_; }
    uint64_t seed() const { return seed_; }
    double int_f() const { return int_f_; }
    double int_g() const { return int_g_; }
    double current_drift_rate() const { return cur_f_; }
    double current_quadratic_rate() const { return cur_g_; }
    const std::array<uint64_t, 4>& rng_state() const { return rng_.state(); }

    // Cached-rate window [lo, hi] and the cached rate at a site.
    std::pair<int64_t, int64_t> active_window() const;
    double cached_rate(int64_t site) const;

    // Largest deviation |cached - fresh| / max(1, |fresh|) over the window
    // and the total; cache-integrity hook.
    double verify_cache() const;

private:
    void ensure_window(int64_t lo, int64_t hi);
    void refresh_all_rates();
    void apply_birth(int64_t site);
    int64_t draw_site();
    void advance_time(double t);
    Checkpoint make_checkpoint(bool with_alpha) const;

    std::shared_ptr<const RateModel> model_;
    Configuration config_;
    SimOptions options_;
    uint64_t seed_;
    Xoshiro256pp rng_;
    double time_ = 0.0;
    uint64_t events_ = 0;
    FenwickTree rates_;
    int64_t window_lo_ = 0;
    double total_ = 0.0;
    double cur_f_ = 0.0;
    double cur_g_ = 0.0;
    double int_f_ = 0.0;
    double int_g_ = 0.0;
};

// Documented seed-splitting rule for replicated batches: run i receives the
// (i+1)-th output of SplitMix64(base_seed).
std::vector<uint64_t> derive_run_seeds(uint64_t base_seed, int n_runs);

// n_runs independent trajectories; deterministic in (base_seed, inputs) and
// independent of the degree of parallelism. parallelism <= 0 picks the
// hardware concurrency.
std::vector<Trajectory> replicate(std::shared_ptr<const RateModel> model,
                                  const Configuration& initial, double t_end,
                                  std::span<const double> checkpoint_times, int n_runs,
                                  uint64_t base_seed, int parallelism,
                                  const RecordOptions& record = {}, SimOptions options = {});

}  // namespace lbp
