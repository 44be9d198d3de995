#include "lbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lbp/errors.hpp"

namespace lbp {

size_t TruncatedChain::index_of(const Configuration& config) const {
    if (!config.empty() && (config.leftmost() < -window_radius || config.tip() > window_radius))
        throw Error("configuration is not supported in the truncation window");
    size_t idx = 0;
    const size_t base = static_cast<size_t>(cap) + 1;
    for (int64_t site = window_radius; site >= -window_radius; --site)
        idx = idx * base + static_cast<size_t>(config.occupancy(site));
    return idx;
}

Configuration TruncatedChain::config_of(size_t index) const {
    const size_t base = static_cast<size_t>(cap) + 1;
    std::vector<int32_t> cells(static_cast<size_t>(sites()));
    for (auto& c : cells) {
        c = static_cast<int32_t>(index % base);
        index /= base;
    }
    return Configuration(-window_radius, std::move(cells), cap);
}

TruncatedChain build_truncation(std::shared_ptr<const RateModel> model, int32_t window_radius,
                                uint64_t state_budget) {
    if (!model) throw Error("model is null");
    if (window_radius < 0) throw Error("window radius must be nonnegative");

    TruncatedChain chain;
    chain.window_radius = window_radius;
    chain.cap = model->cap();
    chain.model = model;

    const size_t base = static_cast<size_t>(chain.cap) + 1;
    uint64_t count = 1;
    bool over = false;
    for (int32_t i = 0; i < chain.sites() && !over; ++i) {
        if (count > state_budget / base)
            over = true;
        else
            count *= base;
    }
    if (over || count > state_budget)
        throw BudgetError("truncation state space exceeds budget");
    chain.state_count = count;
    chain.exit_rate.assign(count, 0.0);

    // Strides: one birth at site x moves the index up by base^(x+L).
    std::vector<size_t> stride(static_cast<size_t>(chain.sites()));
    size_t s = 1;
    for (auto& v : stride) {
        v = s;
        s *= base;
    }

    std::vector<int32_t> cells(static_cast<size_t>(chain.sites()), 0);
    for (size_t idx = 0; idx < count; ++idx) {
        const Configuration config(-window_radius, {cells.begin(), cells.end()}, chain.cap);
        double exit = 0.0;
        for (int32_t i = 0; i < chain.sites(); ++i) {
            if (cells[static_cast<size_t>(i)] >= chain.cap) continue;
            const int64_t site = -window_radius + i;
            const double r = model->rate(site, config);
            if (r > 0.0) {
                chain.transitions.push_back(
                    {static_cast<uint32_t>(idx),
                     static_cast<uint32_t>(idx + stride[static_cast<size_t>(i)]), r});
                exit += r;
            }
        }
        chain.exit_rate[idx] = exit;
        chain.uniformization_rate = std::max(chain.uniformization_rate, exit);
        // odometer
        for (size_t i = 0; i < cells.size(); ++i) {
            if (cells[i] < chain.cap) {
                ++cells[i];
                break;
            }
            cells[i] = 0;
        }
    }
    return chain;
}

namespace {

// One uniformization stage: p(t + dt) from p(t) with Poisson truncation
// keeping the dropped mass below tol.
std::vector<double> uniform_stage(const TruncatedChain& chain, const std::vector<double>& p,
                                  double dt, double tol) {
    const double lambda = chain.uniformization_rate;
    const double q = lambda * dt;
    if (q == 0.0) return p;

    std::vector<double> acc(p.size(), 0.0);
    std::vector<double> v = p;
    std::vector<double> next(p.size());

    double weight = std::exp(-q);
    double cumulative = weight;
    for (size_t i = 0; i < p.size(); ++i) acc[i] = weight * v[i];

    uint64_t k = 0;
    while (cumulative < 1.0 - tol) {
        ++k;
        // next = v * P with P = I + Q/lambda
        for (size_t i = 0; i < v.size(); ++i)
            next[i] = v[i] * (1.0 - chain.exit_rate[i] / lambda);
        for (const auto& tr : chain.transitions)
            next[tr.to] += v[tr.from] * (tr.rate / lambda);
        v.swap(next);
        weight *= q / static_cast<double>(k);
        cumulative += weight;
        for (size_t i = 0; i < v.size(); ++i) acc[i] += weight * v[i];
        if (k > 100000) throw Error("uniformization failed to converge");
    }
    return acc;
}

OracleResult summarize(const TruncatedChain& chain, std::vector<double> dist, double t) {
    OracleResult out;
    out.time = t;
    out.mean_occupancy.assign(static_cast<size_t>(chain.sites()), 0.0);
    out.occupancy_second_moment.assign(static_cast<size_t>(chain.sites()), 0.0);
    out.tip_law.assign(static_cast<size_t>(chain.sites()), 0.0);
    const size_t base = static_cast<size_t>(chain.cap) + 1;
    for (size_t idx = 0; idx < dist.size(); ++idx) {
        const double p = dist[idx];
        if (p == 0.0) continue;
        size_t rem = idx;
        int64_t mass = 0;
        int32_t tip_i = -1;
        for (int32_t i = 0; i < chain.sites(); ++i) {
            const auto occ = static_cast<int32_t>(rem % base);
            rem /= base;
            if (occ > 0) tip_i = i;
            mass += occ;
            out.mean_occupancy[static_cast<size_t>(i)] += p * occ;
            out.occupancy_second_moment[static_cast<size_t>(i)] +=
                p * static_cast<double>(occ) * static_cast<double>(occ);
        }
        out.mean_mass += p * static_cast<double>(mass);
        out.mass_second_moment += p * static_cast<double>(mass) * static_cast<double>(mass);
        if (tip_i < 0) {
            out.p_empty += p;
        } else {
            const double tip = static_cast<double>(tip_i - chain.window_radius);
            out.tip_law[static_cast<size_t>(tip_i)] += p;
            out.mean_tip += p * tip;
            out.tip_second_moment += p * tip * tip;
        }
    }
    out.distribution = std::move(dist);
    return out;
}

}  // namespace

OracleResult transient_from(const TruncatedChain& chain, std::vector<double> initial_distribution,
                            double t, double tol) {
    if (tol <= 0.0) throw Error("tolerance must be positive");
    if (t < 0.0) throw Error("time must be nonnegative");
    if (initial_distribution.size() != chain.state_count)
        throw Error("initial distribution has wrong size");

    // Split long horizons so each stage keeps a moderate Poisson mean.
    const double q_total = chain.uniformization_rate * t;
    const int stages = std::max(1, static_cast<int>(std::ceil(q_total / 64.0)));
    const double stage_tol = tol / static_cast<double>(stages);
    std::vector<double> p = std::move(initial_distribution);
    for (int s = 0; s < stages; ++s)
        p = uniform_stage(chain, p, t / static_cast<double>(stages), stage_tol);
    return summarize(chain, std::move(p), t);
}

OracleResult transient(const TruncatedChain& chain, const Configuration& initial, double t,
                       double tol) {
    std::vector<double> p(chain.state_count, 0.0);
    p[chain.index_of(initial)] = 1.0;
    return transient_from(chain, std::move(p), t, tol);
}

double boundary_risk_bound(const TruncatedChain& chain, double t, double rate_upper) {
    const double mu = rate_upper * static_cast<double>(chain.sites()) * t;
    const auto range = static_cast<double>(chain.model ? chain.model->range() : 1);
    const auto needed = static_cast<uint64_t>(
        std::ceil(static_cast<double>(chain.window_radius) / range));
    // P(Poisson(mu) >= needed)
    double term = std::exp(-mu);
    double below = 0.0;
    for (uint64_t j = 0; j < needed; ++j) {
        below += term;
        term *= mu / static_cast<double>(j + 1);
    }
    return std::clamp(1.0 - below, 0.0, 1.0);
}

void write_golden(const std::string& path, const std::string& metadata,
                  std::span<const double> distribution) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open golden file for writing: " + path);
    out << "# " << metadata << "\n";
    out << "state_index,probability\n";
    char buf[48];
    for (size_t i = 0; i < distribution.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, distribution[i]);
        out << buf;
    }
}

GoldenFile read_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open golden file: " + path);
    GoldenFile golden;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("golden file is empty");
    if (line.rfind("# ", 0) == 0) {
        golden.metadata = line.substr(2);
        std::getline(in, line);  // header
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("bad golden row: " + line);
        const size_t idx = std::stoull(line.substr(0, comma));
        const double p = std::stod(line.substr(comma + 1));
        if (golden.distribution.size() <= idx) golden.distribution.resize(idx + 1, 0.0);
        golden.distribution[idx] = p;
    }
    return golden;
}

}  // namespace lbp
