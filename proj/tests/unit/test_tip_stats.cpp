#include <doctest.h>

#include <cmath>
#include <memory>

#include "lbp/errors.hpp"
#include "lbp/model_checks.hpp"
#include "lbp/stats.hpp"
#include "lbp/tip_stats.hpp"
#include "test_support.hpp"

using namespace lbp;

namespace {

std::shared_ptr<const RateModel> stock(double c = 0.5) {
    FecEstParams p;
    p.dispersal = Kernel::box(3);
    p.establishment = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.fecundity = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.c_fec = c;
    p.c_est = c;
    p.cap = 3;
    return std::make_shared<FecEstModel>(std::move(p));
}

// Deterministic synthetic trajectory with tip position floor(slope * t).
Trajectory synthetic_ramp(double slope, double t_end, double dt) {
    Trajectory traj;
    traj.model = ModelInfo{"synthetic", 3, 3};
    traj.initial = Configuration::singleton(3);
    traj.start_time = 0.0;
    traj.end_time = t_end;
    int64_t tip = 0;
    for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
        Checkpoint c;
        c.time = t;
        c.tip = static_cast<int64_t>(std::floor(slope * t));
        c.leftmost = -c.tip;
        c.mass = 2 * c.tip + 1;
        traj.checkpoints.push_back(c);
        tip = c.tip;
    }
    traj.final_state = Configuration::singleton(3).shifted(tip);
    return traj;
}

}  // namespace

TEST_CASE("martingale residual starts at the initial tip and needs checkpoints") {
    Simulation sim(stock(), Configuration::singleton(3), 3);
    const Trajectory traj = sim.run_until(2.0, {std::vector<double>{1.0, 2.0}});
    const auto residual = martingale_residual(traj);
    CHECK(residual.front().time == 0.0);
    CHECK(residual.front().value == 0.0);  // X_0 = 0, no drift integrated yet
    CHECK(residual.size() == traj.checkpoints.size());

    Trajectory bare;
    CHECK_THROWS_AS(martingale_residual(bare), MissingDataError);
    CHECK_THROWS_AS(quadratic_variation(bare), MissingDataError);
}

TEST_CASE("speed of a deterministic ramp") {
    std::vector<Trajectory> trajs = {synthetic_ramp(2.0, 1000.0, 10.0)};
    const SpeedEstimate est = speed_estimate(trajs, 100.0, 1000.0);
    CHECK(est.lambda_hat == doctest::Approx(2.0).epsilon(1.0 / 900.0));
    CHECK(est.std_error == 0.0);
    CHECK(est.n_replicas == 1);
    CHECK_THROWS_AS(speed_estimate(trajs, 123.0, 1000.0), MissingDataError);
    CHECK_THROWS_AS(speed_estimate(trajs, 1000.0, 100.0), Error);

    const SpeedEstimate left = left_edge_speed_estimate(trajs, 100.0, 1000.0);
    CHECK(left.lambda_hat == doctest::Approx(2.0).epsilon(1.0 / 900.0));
}

TEST_CASE("nearest-neighbor front speed is positive and stable across seed batches") {
    const auto model =
        std::make_shared<FreeBranchingModel>(Kernel::from_weights(1, {1.0, 0.0, 1.0}), 1);
    const std::vector<double> cps = {20.0, 100.0};
    const auto batch_a = replicate(model, Configuration::singleton(1), 100.0, cps, 60, 1, 2);
    const auto batch_b = replicate(model, Configuration::singleton(1), 100.0, cps, 60, 2, 2);
    const SpeedEstimate sa = speed_estimate(batch_a, 20.0, 100.0);
    const SpeedEstimate sb = speed_estimate(batch_b, 20.0, 100.0);
    CHECK(sa.lambda_hat > 3.0 * sa.std_error);
    CHECK(sb.lambda_hat > 3.0 * sb.std_error);
    const double combined =
        std::sqrt(sa.std_error * sa.std_error + sb.std_error * sb.std_error);
    CHECK(std::fabs(sa.lambda_hat - sb.lambda_hat) < 3.5 * combined);
}

TEST_CASE("quadratic variation with no events has zero realized variation") {
    Simulation sim(stock(), Configuration::singleton(3), 11);
    const Trajectory traj = sim.run_until(1e-4, {std::vector<double>{1e-4}});
    REQUIRE(traj.events.empty());
    const auto qv = quadratic_variation(traj);
    CHECK(qv.back().realized == 0.0);
    CHECK(qv.back().predicted > 0.0);
}

TEST_CASE("realized and predicted quadratic variation agree across replicas") {
    const std::vector<double> cps = {10.0, 20.0};
    const auto trajs = replicate(stock(), Configuration::singleton(3), 20.0, cps, 300, 515, 2);
    for (double t : cps) {
        std::vector<double> realized, predicted;
        for (const auto& tr : trajs) {
            for (const auto& p : quadratic_variation(tr)) {
                if (p.time == t) {
                    realized.push_back(p.realized);
                    predicted.push_back(p.predicted);
                }
            }
        }
        REQUIRE(realized.size() == trajs.size());
        CHECK(std::fabs(stats::two_sample_z(realized, predicted)) < 3.5);
    }
}

TEST_CASE("normalized quadratic variation stabilizes at long times") {
    const std::vector<double> cps = {500.0, 1000.0};
    const auto trajs = replicate(stock(), Configuration::singleton(3), 1000.0, cps, 50, 616, 2);
    std::vector<double> r500, r1000, p500, p1000;
    for (const auto& tr : trajs) {
        for (const auto& p : quadratic_variation(tr)) {
            if (p.time == 500.0) {
                r500.push_back(p.realized / 500.0);
                p500.push_back(p.predicted / 500.0);
            } else if (p.time == 1000.0) {
                r1000.push_back(p.realized / 1000.0);
                p1000.push_back(p.predicted / 1000.0);
            }
        }
    }
    const double m500 = stats::mean(r500), m1000 = stats::mean(r1000);
    CHECK(std::fabs(m1000 - m500) / m1000 < 0.05);
    const double q500 = stats::mean(p500), q1000 = stats::mean(p1000);
    CHECK(std::fabs(q1000 - q500) / q1000 < 0.05);
    // both routes point at the same long-run constant
    CHECK(std::fabs(m1000 - q1000) / q1000 < 0.05);
    CHECK(m1000 > 0.0);
}

TEST_CASE("renewal statistics of the seen-from-tip chain") {
    // Pushed front: slow rightward dispersal over a fast-saturating bulk
    // keeps the tip close to the saturated block, so the renewal state is
    // visited often.
    const auto model =
        std::make_shared<FreeBranchingModel>(Kernel::from_weights(1, {1.0, 1.0, 0.5}), 2);
    RecordOptions record;
    record.alpha_at_events = true;
    const std::vector<double> cps = {50.0, 300.0};
    const auto trajs =
        replicate(model, Configuration::singleton(2), 300.0, cps, 10, 717, 2, record);
    std::vector<double> mean_returns;
    for (const auto& tr : trajs) {
        const ErgodicityReport report = ergodicity_report(tr, 50.0);
        CHECK_FALSE(report.insufficient_excursions);
        REQUIRE(report.entry_times.size() >= 2);
        CHECK(report.return_times.size() + 1 == report.entry_times.size());
        CHECK(report.excursion_qv.size() == report.return_times.size());
        CHECK(report.mean_return_time > 0.0);
        for (double r : report.return_times) CHECK(r > 0.0);
        for (double q : report.excursion_qv) CHECK(q >= 0.0);
        mean_returns.push_back(report.mean_return_time);

        double freq_sum = 0.0;
        for (const auto& [state, freq] : report.occupation) {
            CHECK(state.values.front() >= 1);
            freq_sum += freq;
        }
        CHECK(freq_sum == doctest::Approx(1.0).epsilon(1e-9));

        const std::string occ_csv = ergodicity_occupation_csv(report);
        CHECK(occ_csv.rfind("state_hash,frequency\n", 0) == 0);
        const std::string ret_csv = ergodicity_return_times_csv(report);
        CHECK(ret_csv.rfind("return_time\n", 0) == 0);
    }
    // Positive recurrence in practice: the mean return time is stable
    // across independent runs.
    const double spread = stats::std_dev(mean_returns) / stats::mean(mean_returns);
    CHECK(stats::mean(mean_returns) > 0.0);
    CHECK(spread < 1.0);
}

TEST_CASE("drift average, window speed and mean-path slope agree") {
    RecordOptions record;
    record.alpha_at_events = true;
    const std::vector<double> cps = {50.0, 100.0, 150.0, 200.0};
    const int n = 40;
    std::vector<double> f_bars;
    const auto trajs =
        replicate(stock(), Configuration::singleton(3), 200.0, cps, n, 718, 2, record);
    for (const auto& tr : trajs) {
        const ErgodicityReport report = ergodicity_report(tr, 50.0);
        f_bars.push_back(report.f_time_average);
    }
    const SpeedEstimate window = speed_estimate(trajs, 50.0, 200.0);

    // Slope of the mean tip path over the same checkpoints.
    std::vector<double> times, mean_tip;
    for (double t : cps) {
        double m = 0.0;
        for (const auto& tr : trajs)
            for (const auto& c : tr.checkpoints)
                if (c.time == t) m += static_cast<double>(c.tip);
        times.push_back(t);
        mean_tip.push_back(m / n);
    }
    const double slope = stats::linear_fit(times, mean_tip).first;

    const double se_f = stats::standard_error(f_bars);
    const double combined = std::sqrt(se_f * se_f + window.std_error * window.std_error);
    CHECK(std::fabs(stats::mean(f_bars) - window.lambda_hat) < 3.5 * combined);
    CHECK(std::fabs(slope - window.lambda_hat) < 3.5 * combined + 0.05 * window.lambda_hat);
}

TEST_CASE("ergodicity report requires recorded alpha values") {
    Simulation sim(stock(), Configuration::singleton(3), 5);
    const Trajectory traj = sim.run_until(5.0, {std::vector<double>{5.0}});
    CHECK_THROWS_AS(ergodicity_report(traj, 0.0), MissingDataError);
}

TEST_CASE("too short a horizon flags insufficient excursions") {
    RecordOptions record;
    record.alpha_at_events = true;
    Simulation sim(stock(), Configuration::singleton(3), 6);
    const Trajectory traj = sim.run_until(0.2, {std::vector<double>{0.1, 0.2}}, record);
    const ErgodicityReport report = ergodicity_report(traj, 0.0);
    CHECK(report.insufficient_excursions);
}

TEST_CASE("hitting times of the origin and ordering") {
    Simulation sim(stock(), Configuration::singleton(3), 8);
    const Trajectory traj = sim.run_until(30.0, {std::vector<double>{30.0}});
    const std::vector<int64_t> sites = {0, 1, 5, 12, 40, -7, 100000};
    const HittingTimes ht = hitting_times(traj, sites);
    CHECK(ht.tau[0] == 0.0);
    CHECK(ht.sigma[0] == 0.0);
    CHECK(ht.sigma[1] == 0.0);  // within range of the initial particle
    for (size_t i = 0; i < sites.size(); ++i) {
        CHECK(ht.sigma[i] >= 0.0);
        CHECK(ht.sigma[i] <= ht.tau[i]);
    }
    CHECK(std::isinf(ht.tau.back()));  // far site never reached by t = 30
}

TEST_CASE("occupation delay beyond reach is dominated by the minimal-rate exponential") {
    const auto model = std::make_shared<FreeBranchingModel>(Kernel::box(1), 1);
    const double lower = compute_bounds(*model).lower;
    REQUIRE(lower == 1.0);
    const auto trajs = replicate(model, Configuration::singleton(1), 25.0,
                                 {std::vector<double>{25.0}}, 30, 919, 2);
    std::vector<int64_t> sites;
    for (int64_t x = 1; x <= 20; ++x) sites.push_back(x);
    std::vector<double> delays;
    for (const auto& tr : trajs) {
        const HittingTimes ht = hitting_times(tr, sites);
        for (size_t i = 0; i < sites.size(); ++i)
            if (std::isfinite(ht.tau[i])) delays.push_back(ht.tau[i] - ht.sigma[i]);
    }
    REQUIRE(delays.size() > 300);
    for (double s : {0.5, 1.0, 2.0}) {
        double hits = 0;
        for (double d : delays)
            if (d > s) hits += 1.0;
        const double empirical = hits / static_cast<double>(delays.size());
        CHECK(empirical <= std::exp(-lower * s) + 0.05);
    }
}

TEST_CASE("fluctuation report fields and translation behavior") {
    const auto trajs = replicate(stock(), Configuration::singleton(3), 256.0,
                                 {std::vector<double>{256.0}}, 200, 1021, 2);
    const FluctuationReport report = fluctuation_stats(trajs, 256.0, 3.5, 0.25, 0.1);
    CHECK(report.n == 200);
    CHECK(report.q_grid.front() == 0.0);
    CHECK(report.tail_freq.front() == 1.0);
    for (size_t j = 1; j < report.tail_counts.size(); ++j)
        CHECK(report.tail_counts[j] <= report.tail_counts[j - 1]);
    CHECK(report.residual_std > 0.0);

    // Shifting every tip by a constant and the reference rate by c/t leaves
    // the normalized residuals unchanged.
    auto shifted = trajs;
    const double c = 512.0;
    for (auto& tr : shifted)
        for (auto& cp : tr.checkpoints) cp.tip += static_cast<int64_t>(c);
    const FluctuationReport moved =
        fluctuation_stats(shifted, 256.0, 3.5 + c / 256.0, 0.25, 0.1);
    CHECK(moved.residual_std == doctest::Approx(report.residual_std).epsilon(1e-9));
    REQUIRE(moved.tail_counts.size() == report.tail_counts.size());
    for (size_t j = 0; j < moved.tail_counts.size(); ++j)
        CHECK(moved.tail_counts[j] == report.tail_counts[j]);

    const std::string csv = fluctuation_histogram_csv(report);
    CHECK(csv.rfind("q,count,frequency\n", 0) == 0);
}
