#include "lbp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "lbp/errors.hpp"

namespace lbp {

namespace {

void append_csv_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_csv_int(std::string& out, int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    out += buf;
}

}  // namespace

std::string Trajectory::to_csv() const {
    std::string out = "t,X,Y,mass,int_f,int_g\n";
    for (const Checkpoint& c : checkpoints) {
        append_csv_double(out, c.time);
        out += ',';
        append_csv_int(out, c.tip);
        out += ',';
        append_csv_int(out, c.leftmost);
        out += ',';
        append_csv_int(out, c.mass);
        out += ',';
        append_csv_double(out, c.int_f);
        out += ',';
        append_csv_double(out, c.int_g);
        out += '\n';
    }
    return out;
}

std::string Trajectory::events_to_csv() const {
    std::string out = "t,site\n";
    for (const Event& e : events) {
        append_csv_double(out, e.time);
        out += ',';
        append_csv_int(out, e.site);
        out += '\n';
    }
    return out;
}

Simulation::Simulation(std::shared_ptr<const RateModel> model, Configuration initial,
                       uint64_t seed, SimOptions options)
    : model_(std::move(model)),
      config_(std::move(initial)),
      options_(options),
      seed_(seed),
      rng_(seed) {
    if (!model_) throw Error("model is null");
    if (config_.empty()) throw Error("initial configuration is empty");
    if (config_.cap() != model_->cap()) throw Error("configuration cap differs from model cap");
    if (options_.exact_recompute_interval == 0) options_.exact_recompute_interval = 4096;

    const int64_t pad = model_->dependence_range();
    window_lo_ = config_.leftmost() - pad;
    rates_.reset(static_cast<size_t>(config_.tip() + pad - window_lo_ + 1));
    refresh_all_rates();
    cur_f_ = 0.0;
    cur_g_ = 0.0;
    // Current drift functionals come straight from the cached rates.
    const int64_t tip = config_.tip();
    for (int32_t k = 1; k <= model_->range(); ++k) {
        const double r = cached_rate(tip + k);
        cur_f_ += static_cast<double>(k) * r;
        cur_g_ += static_cast<double>(k) * static_cast<double>(k) * r;
    }
}

std::pair<int64_t, int64_t> Simulation::active_window() const {
    return {window_lo_, window_lo_ + static_cast<int64_t>(rates_.size()) - 1};
}

double Simulation::cached_rate(int64_t site) const {
    const int64_t idx = site - window_lo_;
    if (idx < 0 || idx >= static_cast<int64_t>(rates_.size())) return 0.0;
    return rates_.leaf(static_cast<size_t>(idx));
}

void Simulation::ensure_window(int64_t lo, int64_t hi) {
    const int64_t cur_hi = window_lo_ + static_cast<int64_t>(rates_.size()) - 1;
    if (lo >= window_lo_ && hi <= cur_hi) return;
    const int64_t slack = std::max<int64_t>(64, static_cast<int64_t>(rates_.size()) / 2);
    const int64_t new_lo = std::min(lo - (lo < window_lo_ ? slack : 0), window_lo_);
    const int64_t new_hi = std::max(hi + (hi > cur_hi ? slack : 0), cur_hi);
    std::vector<double> leaves(static_cast<size_t>(new_hi - new_lo + 1), 0.0);
    for (int64_t z = new_lo; z <= new_hi; ++z) {
        if (z >= window_lo_ && z <= cur_hi)
            leaves[static_cast<size_t>(z - new_lo)] = rates_.leaf(static_cast<size_t>(z - window_lo_));
        else
            leaves[static_cast<size_t>(z - new_lo)] = model_->rate(z, config_);
    }
    window_lo_ = new_lo;
    rates_.rebuild(std::move(leaves));
    total_ = rates_.total();
}

void Simulation::refresh_all_rates() {
    std::vector<double> leaves(rates_.size());
    for (size_t i = 0; i < leaves.size(); ++i)
        leaves[i] = model_->rate(window_lo_ + static_cast<int64_t>(i), config_);
    rates_.rebuild(std::move(leaves));
    total_ = rates_.total();
}

void Simulation::advance_time(double t) {
    const double dt = t - time_;
    int_f_ += cur_f_ * dt;
    int_g_ += cur_g_ * dt;
    time_ = t;
}

int64_t Simulation::draw_site() {
    const double target = rng_.uniform() * total_;
    size_t idx = rates_.find(target);
    // Guard against landing past the end or on a zero leaf through floating
    // point edge cases in the descent; pick the nearest positive leaf below.
    if (idx >= rates_.size() || rates_.leaf(idx) <= 0.0) {
        size_t j = std::min(idx, rates_.size() - 1) + 1;
        while (j-- > 0) {
            if (rates_.leaf(j) > 0.0) return window_lo_ + static_cast<int64_t>(j);
        }
        throw FrozenStateError();
    }
    return window_lo_ + static_cast<int64_t>(idx);
}

void Simulation::apply_birth(int64_t site) {
    config_.increment(site);
    const int64_t dep = model_->dependence_range();
    ensure_window(config_.leftmost() - dep, config_.tip() + dep);
    for (int64_t z = site - dep; z <= site + dep; ++z) {
        const int64_t idx = z - window_lo_;
        if (idx < 0 || idx >= static_cast<int64_t>(rates_.size())) continue;
        rates_.set(static_cast<size_t>(idx), model_->rate(z, config_));
    }
    total_ = rates_.total();

    ++events_;
    if (events_ % options_.exact_recompute_interval == 0) refresh_all_rates();

    cur_f_ = 0.0;
    cur_g_ = 0.0;
    const int64_t tip = config_.tip();
    for (int32_t k = 1; k <= model_->range(); ++k) {
        const double r = cached_rate(tip + k);
        cur_f_ += static_cast<double>(k) * r;
        cur_g_ += static_cast<double>(k) * static_cast<double>(k) * r;
    }
}

Event Simulation::step() {
    if (!(total_ > 0.0)) throw FrozenStateError();
    const double dt = rng_.exponential(total_);
    advance_time(time_ + dt);
    const int64_t site = draw_site();
    apply_birth(site);
    return Event{time_, site, config_.tip()};
}

Checkpoint Simulation::make_checkpoint(bool with_alpha) const {
    Checkpoint c;
    c.time = time_;
    c.tip = config_.tip();
    c.leftmost = config_.leftmost();
    c.mass = config_.mass();
    c.int_f = int_f_;
    c.int_g = int_g_;
    if (with_alpha) c.alpha = config_.seen_from_tip(model_->range());
    return c;
}

Trajectory Simulation::run_until(double t_end, std::span<const double> checkpoint_times,
                                 const RecordOptions& record) {
    if (t_end < time_) throw Error("t_end precedes the current time");
    for (size_t i = 0; i < checkpoint_times.size(); ++i) {
        if (i > 0 && checkpoint_times[i] < checkpoint_times[i - 1])
            throw Error("checkpoint times must be ascending");
        if (checkpoint_times[i] < time_ || checkpoint_times[i] > t_end)
            throw Error("checkpoint times must lie in [now, t_end]");
    }

    Trajectory out;
    out.seed = seed_;
    out.model = ModelInfo{model_->describe(), model_->range(), model_->cap()};
    out.initial = config_;
    out.start_time = time_;
    out.checkpoints.push_back(make_checkpoint(record.alpha_at_checkpoints));

    size_t next_cp = 0;
    const size_t n_cp = checkpoint_times.size();
    // Skip checkpoints equal to the start time; the opening row covers them.
    while (next_cp < n_cp && checkpoint_times[next_cp] <= time_) ++next_cp;

    while (true) {
        if (!(total_ > 0.0)) {
            // Absorbing: nothing moves, integrands are zero.
            while (next_cp < n_cp) {
                advance_time(checkpoint_times[next_cp]);
                out.checkpoints.push_back(make_checkpoint(record.alpha_at_checkpoints));
                ++next_cp;
            }
            advance_time(t_end);
            break;
        }
        const double dt = rng_.exponential(total_);
        const double t_next = time_ + dt;
        if (t_next > t_end) {
            while (next_cp < n_cp && checkpoint_times[next_cp] <= t_end) {
                advance_time(checkpoint_times[next_cp]);
                out.checkpoints.push_back(make_checkpoint(record.alpha_at_checkpoints));
                ++next_cp;
            }
            advance_time(t_end);
            break;
        }
        while (next_cp < n_cp && checkpoint_times[next_cp] < t_next) {
            advance_time(checkpoint_times[next_cp]);
            out.checkpoints.push_back(make_checkpoint(record.alpha_at_checkpoints));
            ++next_cp;
        }
        advance_time(t_next);
        const int64_t site = draw_site();
        apply_birth(site);
        out.events.push_back(Event{time_, site, config_.tip()});
        if (record.alpha_at_events)
            out.alpha_at_events.push_back(config_.seen_from_tip(model_->range()));
        // Checkpoints falling exactly on the event time: event applies first.
        while (next_cp < n_cp && checkpoint_times[next_cp] <= time_) {
            out.checkpoints.push_back(make_checkpoint(record.alpha_at_checkpoints));
            ++next_cp;
        }
    }
    out.end_time = time_;
    out.final_state = config_;
    return out;
}

double Simulation::verify_cache() const {
    double worst = 0.0;
    double fresh_total = 0.0;
    for (size_t i = 0; i < rates_.size(); ++i) {
        const double fresh = model_->rate(window_lo_ + static_cast<int64_t>(i), config_);
        fresh_total += fresh;
        const double dev = std::fabs(rates_.leaf(i) - fresh) / std::max(1.0, std::fabs(fresh));
        worst = std::max(worst, dev);
    }
    worst = std::max(worst, std::fabs(total_ - fresh_total) / std::max(1.0, fresh_total));
    return worst;
}

std::vector<uint64_t> derive_run_seeds(uint64_t base_seed, int n_runs) {
    SplitMix64 sm(base_seed);
    std::vector<uint64_t> seeds(static_cast<size_t>(n_runs));
    for (auto& s : seeds) s = sm.next();
    return seeds;
}

std::vector<Trajectory> replicate(std::shared_ptr<const RateModel> model,
                                  const Configuration& initial, double t_end,
                                  std::span<const double> checkpoint_times, int n_runs,
                                  uint64_t base_seed, int parallelism,
                                  const RecordOptions& record, SimOptions options) {
    if (n_runs < 1) throw Error("n_runs must be at least 1");
    const std::vector<uint64_t> seeds = derive_run_seeds(base_seed, n_runs);
    std::vector<Trajectory> out(static_cast<size_t>(n_runs));

    int workers = parallelism;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, n_runs);

    auto run_one = [&](size_t i) {
        Simulation sim(model, initial, seeds[i], options);
        out[i] = sim.run_until(t_end, checkpoint_times, record);
    };

    if (workers <= 1) {
        for (size_t i = 0; i < out.size(); ++i) run_one(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = static_cast<size_t>(w); i < out.size();
                     i += static_cast<size_t>(workers))
                    run_one(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace lbp
