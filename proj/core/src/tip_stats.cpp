#include "lbp/tip_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>

#include "lbp/errors.hpp"
#include "lbp/stats.hpp"

namespace lbp {

namespace {

const Checkpoint& checkpoint_at(const Trajectory& traj, double t) {
    for (const Checkpoint& c : traj.checkpoints) {
        if (std::fabs(c.time - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return c;
    }
    throw MissingDataError("no checkpoint at requested time");
}

}  // namespace

std::vector<MartingalePoint> martingale_residual(const Trajectory& traj) {
    if (traj.checkpoints.empty())
        throw MissingDataError("trajectory carries no checkpointed integrals");
    std::vector<MartingalePoint> out;
    out.reserve(traj.checkpoints.size());
    for (const Checkpoint& c : traj.checkpoints)
        out.push_back({c.time, static_cast<double>(c.tip) - c.int_f});
    return out;
}

std::vector<QuadraticVariationPoint> quadratic_variation(const Trajectory& traj) {
    if (traj.checkpoints.empty())
        throw MissingDataError("trajectory carries no checkpointed integrals");
    std::vector<QuadraticVariationPoint> out;
    out.reserve(traj.checkpoints.size());
    size_t next_event = 0;
    int64_t prev_tip = traj.initial.tip();
    double realized = 0.0;
    for (const Checkpoint& c : traj.checkpoints) {
        while (next_event < traj.events.size() && traj.events[next_event].time <= c.time) {
            const int64_t jump = traj.events[next_event].tip_after - prev_tip;
            realized += static_cast<double>(jump) * static_cast<double>(jump);
            prev_tip = traj.events[next_event].tip_after;
            ++next_event;
        }
        out.push_back({c.time, realized, c.int_g});
    }
    return out;
}

namespace {

SpeedEstimate edge_speed(std::span<const Trajectory> trajectories, double t1, double t2,
                         bool left_edge) {
    if (t1 >= t2) throw Error("t1 must precede t2");
    SpeedEstimate est;
    est.t1 = t1;
    est.t2 = t2;
    est.n_replicas = static_cast<int>(trajectories.size());
    est.per_run.reserve(trajectories.size());
    for (const Trajectory& traj : trajectories) {
        const Checkpoint& a = checkpoint_at(traj, t1);
        const Checkpoint& b = checkpoint_at(traj, t2);
        const double dx = left_edge ? static_cast<double>(a.leftmost - b.leftmost)
                                    : static_cast<double>(b.tip - a.tip);
        est.per_run.push_back(dx / (t2 - t1));
    }
    est.lambda_hat = stats::mean(est.per_run);
    est.std_error = stats::standard_error(est.per_run);
    return est;
}

}  // namespace

SpeedEstimate speed_estimate(std::span<const Trajectory> trajectories, double t1, double t2) {
    return edge_speed(trajectories, t1, t2, false);
}

SpeedEstimate left_edge_speed_estimate(std::span<const Trajectory> trajectories, double t1,
                                       double t2) {
    return edge_speed(trajectories, t1, t2, true);
}

ErgodicityReport ergodicity_report(const Trajectory& traj, double burn_in) {
    if (traj.alpha_at_events.size() != traj.events.size())
        throw MissingDataError("trajectory was run without alpha recording at events");

    ErgodicityReport report;
    const double horizon = traj.end_time;

    // Renewal entries: transitions into the single-entry state.
    SeenFromTip prev = traj.initial.seen_from_tip(traj.model.range);
    int64_t prev_tip = traj.initial.tip();
    std::vector<double> entry_qv;  // realized QV at each entry
    double realized = 0.0;
    for (size_t i = 0; i < traj.events.size(); ++i) {
        const SeenFromTip& cur = traj.alpha_at_events[i];
        const int64_t jump = traj.events[i].tip_after - prev_tip;
        realized += static_cast<double>(jump) * static_cast<double>(jump);
        prev_tip = traj.events[i].tip_after;
        if (cur.is_renewal() && !prev.is_renewal() && traj.events[i].time >= burn_in) {
            report.entry_times.push_back(traj.events[i].time);
            entry_qv.push_back(realized);
        }
        prev = cur;
    }
    for (size_t i = 1; i < report.entry_times.size(); ++i) {
        report.return_times.push_back(report.entry_times[i] - report.entry_times[i - 1]);
        report.excursion_qv.push_back(entry_qv[i] - entry_qv[i - 1]);
    }
    report.insufficient_excursions = report.entry_times.size() < 2;
    if (!report.return_times.empty()) report.mean_return_time = stats::mean(report.return_times);

    // Sojourn-time occupation frequencies over [burn_in, horizon].
    std::map<std::vector<int32_t>, double> sojourn;
    SeenFromTip state = traj.initial.seen_from_tip(traj.model.range);
    double t_prev = traj.start_time;
    double total_time = 0.0;
    auto credit = [&](const SeenFromTip& s, double from, double to) {
        const double lo = std::max(from, burn_in);
        if (to <= lo) return;
        sojourn[s.values] += to - lo;
        total_time += to - lo;
    };
    for (size_t i = 0; i < traj.events.size(); ++i) {
        credit(state, t_prev, traj.events[i].time);
        t_prev = traj.events[i].time;
        state = traj.alpha_at_events[i];
    }
    credit(state, t_prev, horizon);
    if (total_time > 0.0) {
        for (const auto& [values, time] : sojourn) {
            SeenFromTip s;
            s.values = values;
            s.cap = traj.model.cap;
            s.range = traj.model.range;
            report.occupation.emplace_back(std::move(s), time / total_time);
        }
    }

    // Time average of the drift integrand between the first checkpoint at or
    // after burn-in and the last one.
    const Checkpoint* first = nullptr;
    const Checkpoint* last = nullptr;
    for (const Checkpoint& c : traj.checkpoints) {
        if (c.time >= burn_in && !first) first = &c;
        last = &c;
    }
    if (!first || !last || last->time <= first->time)
        throw MissingDataError("need two checkpoints at or after burn-in for the time average");
    report.f_time_average = (last->int_f - first->int_f) / (last->time - first->time);
    return report;
}

std::string ergodicity_occupation_csv(const ErgodicityReport& report) {
    std::string out = "state_hash,frequency\n";
    char buf[64];
    for (const auto& [state, freq] : report.occupation) {
        std::snprintf(buf, sizeof(buf), "%llu,%.17g\n",
                      static_cast<unsigned long long>(state.hash()), freq);
        out += buf;
    }
    return out;
}

std::string ergodicity_return_times_csv(const ErgodicityReport& report) {
    std::string out = "return_time\n";
    char buf[40];
    for (double r : report.return_times) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", r);
        out += buf;
    }
    return out;
}

HittingTimes hitting_times(const Trajectory& traj, std::span<const int64_t> sites) {
    const double inf = std::numeric_limits<double>::infinity();
    HittingTimes out;
    out.sites.assign(sites.begin(), sites.end());
    out.sigma.assign(sites.size(), inf);
    out.tau.assign(sites.size(), inf);
    const int64_t range = traj.model.range;

    const std::vector<int64_t> occ0 = traj.initial.occupied();
    for (size_t i = 0; i < out.sites.size(); ++i) {
        const int64_t x = out.sites[i];
        if (traj.initial.occupancy(x) > 0) out.tau[i] = traj.start_time;
        for (int64_t y : occ0) {
            if (std::llabs(y - x) <= range) {
                out.sigma[i] = traj.start_time;
                break;
            }
        }
    }
    for (const Event& e : traj.events) {
        for (size_t i = 0; i < out.sites.size(); ++i) {
            if (std::isinf(out.sigma[i]) && std::llabs(e.site - out.sites[i]) <= range)
                out.sigma[i] = e.time;
            if (std::isinf(out.tau[i]) && e.site == out.sites[i]) out.tau[i] = e.time;
        }
    }
    return out;
}

FluctuationReport fluctuation_stats(std::span<const Trajectory> trajectories, double t,
                                    double lambda_hat, double q_step, double rel_deviation) {
    if (trajectories.empty()) throw Error("no trajectories");
    if (q_step <= 0.0) throw Error("q_step must be positive");

    FluctuationReport report;
    report.time = t;
    report.lambda_hat = lambda_hat;
    report.n = static_cast<int>(trajectories.size());
    report.rel_deviation_threshold = rel_deviation;

    std::vector<double> residuals;
    residuals.reserve(trajectories.size());
    int64_t rel_hits = 0;
    for (const Trajectory& traj : trajectories) {
        const Checkpoint& c = checkpoint_at(traj, t);
        const double r = static_cast<double>(c.tip) - lambda_hat * t;
        residuals.push_back(r);
        if (std::fabs(static_cast<double>(c.tip) / t - lambda_hat) >=
            rel_deviation * std::fabs(lambda_hat))
            ++rel_hits;
    }
    report.residual_mean = stats::mean(residuals);
    report.residual_std = stats::std_dev(residuals);
    report.rel_deviation_prob =
        static_cast<double>(rel_hits) / static_cast<double>(trajectories.size());

    const double sqrt_t = std::sqrt(t);
    double zmax = 0.0;
    std::vector<double> z;
    z.reserve(residuals.size());
    for (double r : residuals) {
        z.push_back(std::fabs(r) / sqrt_t);
        zmax = std::max(zmax, z.back());
    }
    const auto grid_n = static_cast<size_t>(std::floor(zmax / q_step)) + 2;
    report.q_grid.resize(grid_n);
    report.tail_counts.assign(grid_n, 0);
    report.tail_freq.assign(grid_n, 0.0);
    for (size_t j = 0; j < grid_n; ++j) report.q_grid[j] = static_cast<double>(j) * q_step;
    for (double v : z)
        for (size_t j = 0; j < grid_n && report.q_grid[j] <= v; ++j) ++report.tail_counts[j];
    for (size_t j = 0; j < grid_n; ++j)
        report.tail_freq[j] =
            static_cast<double>(report.tail_counts[j]) / static_cast<double>(report.n);

    std::vector<double> xs, ys;
    for (size_t j = 0; j < grid_n; ++j) {
        if (report.tail_counts[j] == 0) continue;
        xs.push_back(report.q_grid[j] * report.q_grid[j]);
        ys.push_back(std::log(report.tail_freq[j]));
    }
    report.log_tail_slope_q2 = stats::linear_fit(xs, ys).first;
    return report;
}

std::string fluctuation_histogram_csv(const FluctuationReport& report) {
    std::string out = "q,count,frequency\n";
    char buf[80];
    for (size_t j = 0; j < report.q_grid.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%lld,%.17g\n", report.q_grid[j],
                      static_cast<long long>(report.tail_counts[j]), report.tail_freq[j]);
        out += buf;
    }
    return out;
}

}  // namespace lbp
