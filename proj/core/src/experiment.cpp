#include "lbp/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lbp/errors.hpp"
#include "lbp/functionals.hpp"
#include "lbp/model_checks.hpp"
#include "lbp/oracle.hpp"
#include "lbp/rng.hpp"
#include "lbp/stats.hpp"
#include "lbp/svg.hpp"

namespace lbp {

namespace {

// Fixed stream tags separating the seed streams of unrelated draws.
constexpr uint64_t kSweepPairsStream = 0x73776565702d7074ULL;
constexpr uint64_t kLambdaStream = 0x6c616d6264612d30ULL;
constexpr uint64_t kFluctStream = 0x666c7563742d3030ULL;
constexpr uint64_t kOracleStream = 0x6f7261636c652d30ULL;
constexpr uint64_t kMartingaleStream = 0x6d6172742d303030ULL;
constexpr uint64_t kConditionStream = 0x636f6e642d303030ULL;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int64_t parse_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const int64_t out = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ParseError("bad integer for " + key + ": '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ParseError("bad number for " + key + ": '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) out.push_back(parse_double(tok, key));
    if (out.empty()) throw ParseError("empty list for " + key);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<double> checkpoint_grid(double dt, double t_end) {
    std::vector<double> out;
    for (double t = dt; t <= t_end * (1.0 + 1e-12); t += dt) out.push_back(std::min(t, t_end));
    if (out.empty() || out.back() < t_end) out.push_back(t_end);
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError("empty value for " + key);

        if (key == "model") cfg.model = value;
        else if (key == "cap") cfg.cap = static_cast<int32_t>(parse_int(value, key));
        else if (key == "a_radius") cfg.a_radius = static_cast<int32_t>(parse_int(value, key));
        else if (key == "a_weights") cfg.a_weights = parse_list(value, key);
        else if (key == "phi_radius") cfg.phi_radius = static_cast<int32_t>(parse_int(value, key));
        else if (key == "phi_weights") cfg.phi_weights = parse_list(value, key);
        else if (key == "psi_radius") cfg.psi_radius = static_cast<int32_t>(parse_int(value, key));
        else if (key == "psi_weights") cfg.psi_weights = parse_list(value, key);
        else if (key == "c_fec") cfg.c_fec = parse_double(value, key);
        else if (key == "c_est") cfg.c_est = parse_double(value, key);
        else if (key == "t1") cfg.t1 = parse_double(value, key);
        else if (key == "t2") cfg.t2 = parse_double(value, key);
        else if (key == "checkpoint_dt") cfg.checkpoint_dt = parse_double(value, key);
        else if (key == "replicas") cfg.replicas = static_cast<int>(parse_int(value, key));
        else if (key == "base_seed") cfg.base_seed = static_cast<uint64_t>(parse_int(value, key));
        else if (key == "parallelism") cfg.parallelism = static_cast<int>(parse_int(value, key));
        else if (key == "sweep_mode") cfg.sweep_mode = value;
        else if (key == "sweep_count") cfg.sweep_count = static_cast<int>(parse_int(value, key));
        else if (key == "curve_points") cfg.curve_points = static_cast<int>(parse_int(value, key));
        else if (key == "curve_c_fec") cfg.curve_c_fec = parse_double(value, key);
        else if (key == "trajectory_runs")
            cfg.trajectory_runs = static_cast<int>(parse_int(value, key));
        else if (key == "fluct_times") cfg.fluct_times = parse_list(value, key);
        else if (key == "fluct_replicas")
            cfg.fluct_replicas = static_cast<int>(parse_int(value, key));
        else if (key == "lambda_replicas")
            cfg.lambda_replicas = static_cast<int>(parse_int(value, key));
        else if (key == "q_step") cfg.q_step = parse_double(value, key);
        else if (key == "rel_deviation") cfg.rel_deviation = parse_double(value, key);
        else if (key == "oracle_L") cfg.oracle_L = static_cast<int32_t>(parse_int(value, key));
        else if (key == "oracle_t") cfg.oracle_t = parse_double(value, key);
        else if (key == "oracle_tol") cfg.oracle_tol = parse_double(value, key);
        else if (key == "oracle_replicas")
            cfg.oracle_replicas = static_cast<int>(parse_int(value, key));
        else if (key == "martingale_times") cfg.martingale_times = parse_list(value, key);
        else if (key == "martingale_replicas")
            cfg.martingale_replicas = static_cast<int>(parse_int(value, key));
        else if (key == "condition_trials") cfg.condition_trials = parse_int(value, key);
        else if (key == "z_limit") cfg.z_limit = parse_double(value, key);
        else if (key == "out_dir") cfg.out_dir = value;
        else throw ParseError("unknown key: " + key);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void ExperimentConfig::validate() const {
    if (model != "fec_est" && model != "free_branching")
        throw ParseError("model must be fec_est or free_branching");
    if (cap < 1) throw ParseError("cap must be at least 1");
    auto check_kernel = [](const char* name, int32_t radius, const std::vector<double>& w) {
        if (radius < 0) throw ParseError(std::string(name) + "_radius must be nonnegative");
        if (w.size() != static_cast<size_t>(2 * radius + 1))
            throw ParseError(std::string(name) + "_weights must have 2*radius+1 entries");
        for (double x : w)
            if (!(x >= 0.0)) throw ParseError(std::string(name) + "_weights must be nonnegative");
    };
    check_kernel("a", a_radius, a_weights);
    check_kernel("phi", phi_radius, phi_weights);
    check_kernel("psi", psi_radius, psi_weights);
    if (c_fec < 0 || c_est < 0) throw ParseError("c_fec and c_est must be nonnegative");
    if (!(t1 < t2)) throw ParseError("t1 must be smaller than t2");
    if (t1 < 0) throw ParseError("t1 must be nonnegative");
    if (checkpoint_dt <= 0) throw ParseError("checkpoint_dt must be positive");
    if (replicas < 1 || trajectory_runs < 1 || sweep_count < 1 || curve_points < 1 ||
        fluct_replicas < 1 || lambda_replicas < 1 || oracle_replicas < 1 ||
        martingale_replicas < 1)
        throw ParseError("replica and point counts must be at least 1");
    if (sweep_mode != "random" && sweep_mode != "grid")
        throw ParseError("sweep_mode must be random or grid");
    if (q_step <= 0 || rel_deviation <= 0) throw ParseError("q_step and rel_deviation must be positive");
    if (oracle_L < 1) throw ParseError("oracle_L must be at least 1");
    if (oracle_t <= 0 || oracle_tol <= 0) throw ParseError("oracle_t and oracle_tol must be positive");
    if (fluct_times.empty() || martingale_times.empty())
        throw ParseError("time lists must be nonempty");
    for (double t : fluct_times)
        if (t <= 0) throw ParseError("fluct_times must be positive");
    for (double t : martingale_times)
        if (t <= 0) throw ParseError("martingale_times must be positive");
    if (condition_trials < 1) throw ParseError("condition_trials must be at least 1");
    if (z_limit < 0) throw ParseError("z_limit must be nonnegative");
}

std::shared_ptr<const RateModel> make_model(const ExperimentConfig& config) {
    return make_model(config, config.c_fec, config.c_est);
}

std::shared_ptr<const RateModel> make_model(const ExperimentConfig& config, double c_fec,
                                            double c_est) {
    Kernel a = Kernel::from_weights(config.a_radius, config.a_weights);
    if (config.model == "free_branching")
        return std::make_shared<FreeBranchingModel>(std::move(a), config.cap);
    FecEstParams params;
    params.dispersal = std::move(a);
    params.establishment = Kernel::from_weights(config.phi_radius, config.phi_weights);
    params.fecundity = Kernel::from_weights(config.psi_radius, config.psi_weights);
    params.c_fec = c_fec;
    params.c_est = c_est;
    params.cap = config.cap;
    return std::make_shared<FecEstModel>(std::move(params));
}

uint64_t point_seed(uint64_t base_seed, double c_fec, double c_est) {
    return mix_seed(base_seed, std::bit_cast<uint64_t>(c_fec), std::bit_cast<uint64_t>(c_est));
}

std::vector<std::pair<double, double>> sweep_pairs(const ExperimentConfig& config) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(static_cast<size_t>(config.sweep_count));
    if (config.sweep_mode == "grid") {
        const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.sweep_count))));
        for (int i = 0; i < k && static_cast<int>(pairs.size()) < config.sweep_count; ++i) {
            for (int j = 0; j < k && static_cast<int>(pairs.size()) < config.sweep_count; ++j) {
                const double u = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
                const double v = k == 1 ? 0.0 : static_cast<double>(j) / (k - 1);
                pairs.emplace_back(u, v);
            }
        }
    } else {
        Xoshiro256pp rng(mix_seed(config.base_seed, kSweepPairsStream));
        for (int i = 0; i < config.sweep_count; ++i) {
            const double u = rng.uniform();
            const double v = rng.uniform();
            pairs.emplace_back(u, v);
        }
    }
    return pairs;
}

std::vector<SweepRow> run_sweep_pairs(const ExperimentConfig& config,
                                      std::span<const std::pair<double, double>> pairs) {
    std::vector<SweepRow> rows;
    rows.reserve(pairs.size());
    const Configuration start = Configuration::singleton(config.cap);
    const std::vector<double> checkpoints = {config.t1, config.t2};
    for (const auto& [c_fec, c_est] : pairs) {
        const auto model = make_model(config, c_fec, c_est);
        const auto trajs =
            replicate(model, start, config.t2, checkpoints, config.replicas,
                      point_seed(config.base_seed, c_fec, c_est), config.parallelism);
        const SpeedEstimate est = speed_estimate(trajs, config.t1, config.t2);
        rows.push_back({c_fec, c_est, est.lambda_hat, est.std_error});
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    const auto pairs = sweep_pairs(config);
    return run_sweep_pairs(config, pairs);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "# schema: lbp.sweep.v1\nc_fec,c_est,speed,std_error\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.c_fec);
        out += ',';
        out += format_double(r.c_est);
        out += ',';
        out += format_double(r.speed);
        out += ',';
        out += format_double(r.std_error);
        out += '\n';
    }
    return out;
}

std::vector<CurveRow> run_curve(const ExperimentConfig& config) {
    std::vector<CurveRow> rows;
    const Configuration start = Configuration::singleton(config.cap);
    const std::vector<double> checkpoints = {config.t1, config.t2};
    for (int i = 0; i < config.curve_points; ++i) {
        const double c_est =
            config.curve_points == 1 ? 0.0 : static_cast<double>(i) / (config.curve_points - 1);
        const auto model = make_model(config, config.curve_c_fec, c_est);
        const auto trajs =
            replicate(model, start, config.t2, checkpoints, config.replicas,
                      point_seed(config.base_seed, config.curve_c_fec, c_est),
                      config.parallelism);
        const SpeedEstimate est = speed_estimate(trajs, config.t1, config.t2);
        rows.push_back({c_est, est.lambda_hat, est.std_error});
    }
    return rows;
}

std::string curve_csv(std::span<const CurveRow> rows) {
    std::string out = "# schema: lbp.curve.v1\nc_est,speed,std_error\n";
    for (const CurveRow& r : rows) {
        out += format_double(r.c_est);
        out += ',';
        out += format_double(r.speed);
        out += ',';
        out += format_double(r.std_error);
        out += '\n';
    }
    return out;
}

TrajectoriesResult run_trajectories(const ExperimentConfig& config) {
    TrajectoriesResult result;
    const auto model = make_model(config);
    const auto grid = checkpoint_grid(config.checkpoint_dt, config.t2);
    result.runs = replicate(model, Configuration::singleton(config.cap), config.t2, grid,
                            config.trajectory_runs, config.base_seed, config.parallelism);
    return result;
}

std::string trajectories_csv(const TrajectoriesResult& result) {
    std::string out = "# schema: lbp.trajectories.v1\nrun_id,t,X\n";
    char buf[80];
    for (size_t run = 0; run < result.runs.size(); ++run) {
        for (const Checkpoint& c : result.runs[run].checkpoints) {
            std::snprintf(buf, sizeof(buf), "%zu,%.9g,%lld\n", run, c.time,
                          static_cast<long long>(c.tip));
            out += buf;
        }
    }
    return out;
}

std::string trajectories_svg(const TrajectoriesResult& result) {
    svg::LineChart chart(760, 520, "Tip trajectories");
    chart.set_axis_labels("t", "X(t)");
    for (const Trajectory& traj : result.runs) {
        svg::Series series;
        series.points.reserve(traj.checkpoints.size());
        for (const Checkpoint& c : traj.checkpoints)
            series.points.emplace_back(c.time, static_cast<double>(c.tip));
        chart.add_series(std::move(series));
    }
    return chart.render();
}

FluctResult run_fluct(const ExperimentConfig& config) {
    FluctResult result;
    const auto model = make_model(config);
    const Configuration start = Configuration::singleton(config.cap);

    // Long-run speed from an independent batch of seeds.
    {
        const std::vector<double> cps = {config.t1, config.t2};
        const auto trajs = replicate(model, start, config.t2, cps, config.lambda_replicas,
                                     mix_seed(config.base_seed, kLambdaStream),
                                     config.parallelism);
        const SpeedEstimate est = speed_estimate(trajs, config.t1, config.t2);
        result.lambda_hat = est.lambda_hat;
        result.lambda_std_error = est.std_error;
    }

    std::vector<double> times = config.fluct_times;
    std::sort(times.begin(), times.end());
    const auto trajs = replicate(model, start, times.back(), times, config.fluct_replicas,
                                 mix_seed(config.base_seed, kFluctStream), config.parallelism);
    for (double t : times)
        result.reports.push_back(
            fluctuation_stats(trajs, t, result.lambda_hat, config.q_step, config.rel_deviation));
    return result;
}

std::string fluct_tail_csv(const FluctResult& result) {
    std::string out =
        "# schema: lbp.fluct-tail.v1\n"
        "t,n,lambda_hat,lambda_se,residual_mean,residual_std,log_tail_slope_q2,"
        "rel_dev_threshold,rel_dev_prob\n";
    char buf[240];
    for (const FluctuationReport& r : result.reports) {
        std::snprintf(buf, sizeof(buf), "%.9g,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.time,
                      r.n, result.lambda_hat, result.lambda_std_error, r.residual_mean,
                      r.residual_std, r.log_tail_slope_q2, r.rel_deviation_threshold,
                      r.rel_deviation_prob);
        out += buf;
    }
    return out;
}

ValidationOutcome run_validate(const ExperimentConfig& config,
                               std::shared_ptr<const RateModel> model_override) {
    ValidationOutcome outcome;
    const std::shared_ptr<const RateModel> model =
        model_override ? std::move(model_override) : make_model(config);

    // Rate-function contract.
    {
        const ConditionReport report = check_conditions(
            *model, config.condition_trials, mix_seed(config.base_seed, kConditionStream));
        std::string detail = report.summary();
        for (const auto& s : report.samples) detail += "\n    " + s;
        outcome.checks.push_back({"conditions", report.ok(), detail});
    }

    // Exact transient law on a truncation vs the simulator restricted to the
    // same window.
    {
        ValidationOutcome::Check check{"oracle", false, ""};
        try {
            const auto chain = build_truncation(model, config.oracle_L);
            const Configuration start = Configuration::singleton(model->cap());
            const OracleResult exact = transient(chain, start, config.oracle_t, config.oracle_tol);
            const auto windowed =
                std::make_shared<WindowedModel>(model, -config.oracle_L, config.oracle_L);
            const std::vector<double> cps = {config.oracle_t};
            const auto trajs = replicate(windowed, start, config.oracle_t, cps,
                                         config.oracle_replicas,
                                         mix_seed(config.base_seed, kOracleStream),
                                         config.parallelism);
            const auto n = static_cast<double>(trajs.size());
            // z-scores use the exact variance of the truncated law; a zero
            // exact variance only allows the oracle's own mass defect.
            auto z_against = [&](double emp, double expect, double variance) {
                const double se = std::sqrt(std::max(variance, 0.0) / n);
                if (se < 1e-12) return std::fabs(emp - expect) <= 1e-8 ? 0.0 : INFINITY;
                return (emp - expect) / se;
            };
            double worst_z = 0.0;
            for (int64_t x = -config.oracle_L; x <= config.oracle_L; ++x) {
                const auto i = static_cast<size_t>(x + config.oracle_L);
                std::vector<double> occ;
                occ.reserve(trajs.size());
                for (const auto& tr : trajs)
                    occ.push_back(static_cast<double>(tr.final_state.occupancy(x)));
                const double z =
                    z_against(stats::mean(occ), exact.mean_occupancy[i],
                              exact.occupancy_variance(i));
                worst_z = std::max(worst_z, std::fabs(z));
            }
            std::vector<double> tips;
            tips.reserve(trajs.size());
            for (const auto& tr : trajs)
                tips.push_back(static_cast<double>(tr.final_state.tip()));
            const double tip_z =
                z_against(stats::mean(tips), exact.mean_tip, exact.tip_variance());
            std::ostringstream os;
            os << "max |z| per-site=" << format_double(worst_z)
               << " tip z=" << format_double(std::fabs(tip_z)) << " (limit "
               << format_double(config.z_limit) << ", replicas=" << trajs.size()
               << ", boundary-risk bound "
               << format_double(boundary_risk_bound(chain, config.oracle_t,
                                                    compute_bounds(*model).upper))
               << " handled by window restriction)";
            check.detail = os.str();
            check.passed = worst_z <= config.z_limit && std::fabs(tip_z) <= config.z_limit;
        } catch (const Error& e) {
            check.detail = std::string("error: ") + e.what();
        }
        outcome.checks.push_back(std::move(check));
    }

    // Martingale and compensated quadratic variation.
    {
        ValidationOutcome::Check check{"martingale", false, ""};
        try {
            std::vector<double> times = config.martingale_times;
            std::sort(times.begin(), times.end());
            const Configuration start = Configuration::singleton(model->cap());
            const auto trajs = replicate(model, start, times.back(), times,
                                         config.martingale_replicas,
                                         mix_seed(config.base_seed, kMartingaleStream),
                                         config.parallelism);
            std::ostringstream os;
            bool ok = true;
            for (double t : times) {
                std::vector<double> m_diff, realized, predicted;
                for (const auto& tr : trajs) {
                    const auto residual = martingale_residual(tr);
                    const double m0 = residual.front().value;
                    double mt = 0.0;
                    for (const auto& p : residual)
                        if (std::fabs(p.time - t) <= 1e-9 * std::max(1.0, t)) mt = p.value;
                    m_diff.push_back(mt - m0);
                    const auto qv = quadratic_variation(tr);
                    for (const auto& p : qv) {
                        if (std::fabs(p.time - t) <= 1e-9 * std::max(1.0, t)) {
                            realized.push_back(p.realized);
                            predicted.push_back(p.predicted);
                        }
                    }
                }
                const double mz = stats::z_score(m_diff, 0.0);
                const double qz = stats::two_sample_z(realized, predicted);
                ok = ok && std::fabs(mz) <= config.z_limit && std::fabs(qz) <= config.z_limit;
                os << "t=" << format_double(t) << ": mean-martingale z=" << format_double(mz)
                   << ", qv z=" << format_double(qz) << "; ";
            }
            os << "(limit " << format_double(config.z_limit) << ")";
            check.detail = os.str();
            check.passed = ok;
        } catch (const Error& e) {
            check.detail = std::string("error: ") + e.what();
        }
        outcome.checks.push_back(std::move(check));
    }
    return outcome;
}

std::string validation_text(const ValidationOutcome& outcome) {
    std::string out;
    for (const auto& check : outcome.checks) {
        out += check.passed ? "[PASS] " : "[FAIL] ";
        out += check.name;
        out += ": ";
        out += check.detail;
        out += '\n';
    }
    out += outcome.ok() ? "validation OK\n" : "validation FAILED\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

}  // namespace lbp
