#include <doctest.h>

#include <cmath>
#include <memory>

#include "lbp/errors.hpp"
#include "lbp/experiment.hpp"
#include "lbp/stats.hpp"

using namespace lbp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.t1 = 5;
    cfg.t2 = 20;
    cfg.checkpoint_dt = 5;
    cfg.replicas = 8;
    cfg.trajectory_runs = 4;
    cfg.sweep_count = 4;
    cfg.sweep_mode = "grid";
    cfg.curve_points = 2;
    cfg.fluct_times = {5, 10};
    cfg.fluct_replicas = 40;
    cfg.lambda_replicas = 20;
    cfg.oracle_replicas = 500;
    cfg.oracle_t = 0.3;
    cfg.martingale_times = {5, 10};
    cfg.martingale_replicas = 200;
    cfg.condition_trials = 2000;
    cfg.base_seed = 424242;
    cfg.parallelism = 2;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing, defaults and rejection of bad input") {
    const ExperimentConfig cfg = ExperimentConfig::parse(
        "# comment\n"
        "model = free_branching\n"
        "cap = 2\n"
        "a_radius = 1\n"
        "a_weights = 0.5 1 0.5\n"
        "t1 = 10\n"
        "t2 = 90\n"
        "base_seed = 99\n");
    CHECK(cfg.model == "free_branching");
    CHECK(cfg.cap == 2);
    CHECK(cfg.a_weights == std::vector<double>{0.5, 1.0, 0.5});
    CHECK(cfg.t1 == 10.0);
    CHECK(cfg.base_seed == 99);
    // untouched defaults
    CHECK(cfg.c_fec == 0.5);
    CHECK(cfg.replicas == 50);

    CHECK_THROWS_AS(ExperimentConfig::parse("nonsense_key = 3\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse("cap = many\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse("cap\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse("t1 = 50\nt2 = 10\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse("a_radius = 2\na_weights = 1 1 1\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse("model = magic\n"), ParseError);
    CHECK_THROWS_AS(ExperimentConfig::parse_file("/no/such/file.cfg"), ParseError);
}

TEST_CASE("config model factory") {
    ExperimentConfig cfg;
    const auto fec = make_model(cfg);
    CHECK(fec->describe().find("fec_est") != std::string::npos);
    CHECK(fec->range() == 3);
    cfg.model = "free_branching";
    const auto free_model = make_model(cfg);
    CHECK(free_model->describe().find("free_branching") != std::string::npos);
}

TEST_CASE("grid sweep of a single point sits at the origin of the parameter square") {
    ExperimentConfig cfg = small_config();
    cfg.sweep_count = 1;
    cfg.model = "fec_est";
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].c_fec == 0.0);
    CHECK(rows[0].c_est == 0.0);
    // zero regulation = free branching; the front moves
    CHECK(rows[0].speed > 0.0);
}

TEST_CASE("duplicate sweep pairs give identical rows") {
    ExperimentConfig cfg = small_config();
    const std::vector<std::pair<double, double>> pairs = {{0.3, 0.7}, {0.3, 0.7}};
    const auto rows = run_sweep_pairs(cfg, pairs);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].speed == rows[1].speed);
    CHECK(rows[0].std_error == rows[1].std_error);
}

TEST_CASE("sweep output is deterministic and independent of parallelism") {
    ExperimentConfig a = small_config();
    const std::string first = sweep_csv(run_sweep(a));
    const std::string second = sweep_csv(run_sweep(a));
    CHECK(first == second);
    ExperimentConfig b = small_config();
    b.parallelism = 1;
    CHECK(sweep_csv(run_sweep(b)) == first);
    CHECK(first.rfind("# schema: lbp.sweep.v1\nc_fec,c_est,speed,std_error\n", 0) == 0);
}

TEST_CASE("random sweep pairs are reproducible and land in the unit square") {
    ExperimentConfig cfg = small_config();
    cfg.sweep_mode = "random";
    cfg.sweep_count = 50;
    const auto p1 = sweep_pairs(cfg);
    const auto p2 = sweep_pairs(cfg);
    CHECK(p1 == p2);
    for (const auto& [u, v] : p1) {
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    cfg.base_seed += 1;
    CHECK(sweep_pairs(cfg) != p1);
}

TEST_CASE("curve rows cover the requested c_est grid") {
    ExperimentConfig cfg = small_config();
    cfg.curve_points = 3;
    const auto rows = run_curve(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].c_est == 0.0);
    CHECK(rows[1].c_est == 0.5);
    CHECK(rows[2].c_est == 1.0);
    const std::string csv = curve_csv(rows);
    CHECK(csv.rfind("# schema: lbp.curve.v1\nc_est,speed,std_error\n", 0) == 0);
}

TEST_CASE("doubling replicas shrinks the speed standard error") {
    ExperimentConfig cfg = small_config();
    cfg.curve_points = 1;
    cfg.replicas = 60;
    const auto base = run_curve(cfg);
    cfg.replicas = 240;  // quadruple: expect halved standard error
    const auto more = run_curve(cfg);
    const double ratio = more[0].std_error / base[0].std_error;
    CHECK(ratio > 0.25);
    CHECK(ratio < 0.95);
}

TEST_CASE("trajectory fan: nondecreasing paths with coherent final speeds") {
    ExperimentConfig cfg = small_config();
    cfg.trajectory_runs = 10;
    cfg.t2 = 60;
    const auto result = run_trajectories(cfg);
    REQUIRE(result.runs.size() == 10);
    std::vector<double> final_speeds;
    for (const auto& traj : result.runs) {
        int64_t last = traj.checkpoints.front().tip;
        int64_t last_left = traj.checkpoints.front().leftmost;
        for (const auto& c : traj.checkpoints) {
            CHECK(c.tip >= last);
            CHECK(c.leftmost <= last_left);
            last = c.tip;
            last_left = c.leftmost;
        }
        final_speeds.push_back(static_cast<double>(traj.checkpoints.back().tip) / cfg.t2);
    }
    const double mean = stats::mean(final_speeds);
    const double sd = stats::std_dev(final_speeds);
    for (double s : final_speeds) CHECK(std::fabs(s - mean) <= 4.5 * sd);

    const std::string csv = trajectories_csv(result);
    CHECK(csv.rfind("# schema: lbp.trajectories.v1\nrun_id,t,X\n", 0) == 0);

    const std::string svg = trajectories_svg(result);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    size_t polylines = 0;
    for (size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1))
        ++polylines;
    CHECK(polylines == 10);
}

TEST_CASE("fluct command produces reports per time with a tail csv") {
    ExperimentConfig cfg = small_config();
    const FluctResult result = run_fluct(cfg);
    REQUIRE(result.reports.size() == cfg.fluct_times.size());
    CHECK(result.lambda_hat > 0.0);
    for (const auto& r : result.reports) CHECK(r.n == cfg.fluct_replicas);
    const std::string csv = fluct_tail_csv(result);
    CHECK(csv.rfind("# schema: lbp.fluct-tail.v1\n", 0) == 0);
}

TEST_CASE("validation passes on the stock model and fails on a broken one") {
    const ExperimentConfig cfg = small_config();
    const ValidationOutcome good = run_validate(cfg);
    CHECK(good.ok());
    CHECK(good.checks.size() == 3);

    // Understating the dependence range breaks the locality contract.
    const auto inner = make_model(cfg);
    const auto lying = std::make_shared<CallbackModel>(
        inner->range(), inner->cap(),
        [inner](int64_t x, const Configuration& c) { return inner->rate(x, c); },
        "understated-range", inner->range());
    const ValidationOutcome bad = run_validate(cfg, lying);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.checks[0].passed);  // conditions

    const std::string text = validation_text(bad);
    CHECK(text.find("[FAIL]") != std::string::npos);
}

TEST_CASE("zero z-limit makes the oracle comparison fail") {
    ExperimentConfig cfg = small_config();
    cfg.z_limit = 0.0;
    cfg.oracle_replicas = 200;
    const ValidationOutcome outcome = run_validate(cfg);
    bool oracle_failed = false;
    for (const auto& check : outcome.checks)
        if (check.name == "oracle") oracle_failed = !check.passed;
    CHECK(oracle_failed);
    CHECK_FALSE(outcome.ok());
}
