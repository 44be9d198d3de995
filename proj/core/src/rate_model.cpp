#include "lbp/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lbp/errors.hpp"

namespace lbp {

Kernel Kernel::zero() { return Kernel{0, {0.0}}; }

Kernel Kernel::box(int32_t radius, double weight) {
    Kernel k;
    k.radius = radius;
    k.weights.assign(static_cast<size_t>(2 * radius + 1), weight);
    return k;
}

Kernel Kernel::from_weights(int32_t radius, std::vector<double> weights) {
    if (radius < 0) throw Error("kernel radius must be nonnegative");
    if (weights.size() != static_cast<size_t>(2 * radius + 1))
        throw Error("kernel weight list must have 2*radius+1 entries");
    for (double w : weights)
        if (!(w >= 0.0)) throw Error("kernel weights must be nonnegative");
    return Kernel{radius, std::move(weights)};
}

double Kernel::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

bool Kernel::is_zero() const {
    return std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; });
}

Kernel Kernel::scaled(double s) const {
    Kernel k = *this;
    for (double& w : k.weights) w *= s;
    return k;
}

Kernel Kernel::mirrored() const {
    Kernel k = *this;
    std::reverse(k.weights.begin(), k.weights.end());
    return k;
}

RateModel::RateModel(int32_t range, int32_t cap) : range_(range), cap_(cap) {
    if (range < 1) throw Error("model range must be at least 1");
    if (cap < 1) throw Error("model cap must be at least 1");
}

FreeBranchingModel::FreeBranchingModel(Kernel dispersal, int32_t cap)
    : RateModel(std::max(dispersal.radius, 1), cap), dispersal_(std::move(dispersal)) {
    if (dispersal_.sum() <= 0.0) throw Error("dispersal kernel must have positive mass");
}

double FreeBranchingModel::rate(int64_t site, const Configuration& config) const {
    if (config.occupancy(site) >= cap_) return 0.0;
    double s = 0.0;
    for (int64_t d = -dispersal_.radius; d <= dispersal_.radius; ++d) {
        const int32_t occ = config.occupancy(site - d);
        if (occ > 0) s += dispersal_.at(d) * occ;
    }
    return s;
}

std::string FreeBranchingModel::describe() const {
    std::ostringstream os;
    os << "free_branching(r=" << dispersal_.radius << ",cap=" << cap_ << ")";
    return os.str();
}

namespace {

int32_t fec_est_range(const FecEstParams& p) {
    return std::max({p.dispersal.radius, p.establishment.radius, p.fecundity.radius, 1});
}

int32_t fec_est_dependence(const FecEstParams& p, const Kernel& est, const Kernel& fec) {
    // The fecundity penalty is centered at the parent, so the rate at x can
    // feel occupancies up to dispersal.radius + fecundity.radius away.
    int32_t dep = p.dispersal.radius;
    if (!est.is_zero()) dep = std::max(dep, est.radius);
    if (!fec.is_zero()) dep = std::max(dep, p.dispersal.radius + fec.radius);
    return std::max(dep, fec_est_range(p));
}

}  // namespace

FecEstModel::FecEstModel(FecEstParams params)
    : RateModel(fec_est_range(params), params.cap),
      params_(std::move(params)),
      est_(params_.establishment.scaled(params_.c_est)),
      fec_(params_.fecundity.scaled(params_.c_fec)),
      dependence_range_(fec_est_dependence(params_, est_, fec_)) {
    if (params_.dispersal.sum() <= 0.0) throw Error("dispersal kernel must have positive mass");
    if (params_.c_fec < 0.0 || params_.c_est < 0.0) throw Error("scalars must be nonnegative");
}

double FecEstModel::rate(int64_t site, const Configuration& config) const {
    if (config.occupancy(site) >= cap_) return 0.0;

    double disp = 0.0;
    const Kernel& a = params_.dispersal;
    for (int64_t d = -a.radius; d <= a.radius; ++d) {
        const double w = a.at(d);
        if (w == 0.0) continue;
        const int64_t parent = site - d;
        const int32_t occ = config.occupancy(parent);
        if (occ == 0) continue;
        double crowd = 0.0;
        for (int64_t e = -fec_.radius; e <= fec_.radius; ++e)
            crowd += fec_.at(e) * config.occupancy(parent + e);
        disp += w * occ * std::exp(-crowd);
    }
    if (disp == 0.0) return 0.0;

    double around = 0.0;
    for (int64_t e = -est_.radius; e <= est_.radius; ++e)
        around += est_.at(e) * config.occupancy(site + e);
    return std::exp(-around) * disp;
}

std::string FecEstModel::describe() const {
    std::ostringstream os;
    os << "fec_est(c_fec=" << params_.c_fec << ",c_est=" << params_.c_est
       << ",cap=" << cap_ << ")";
    return os.str();
}

size_t TableModel::table_size(int32_t range, int32_t cap) {
    size_t n = 1;
    const size_t base = static_cast<size_t>(cap) + 1;
    for (int32_t i = 0; i < 2 * range + 1; ++i) {
        if (n > SIZE_MAX / base) throw BudgetError("table size overflow");
        n *= base;
    }
    return n;
}

size_t TableModel::encode(const std::vector<int32_t>& neighborhood, int32_t cap) {
    size_t idx = 0;
    const size_t base = static_cast<size_t>(cap) + 1;
    for (size_t i = neighborhood.size(); i-- > 0;)
        idx = idx * base + static_cast<size_t>(neighborhood[i]);
    return idx;
}

TableModel::TableModel(int32_t range, int32_t cap, std::vector<double> table)
    : RateModel(range, cap), table_(std::move(table)) {
    if (table_.size() != table_size(range, cap))
        throw Error("rate table has wrong size for (range, cap)");
}

TableModel TableModel::tabulate(const RateModel& model, uint64_t budget) {
    const int32_t r = model.range();
    const int32_t cap = model.cap();
    const size_t n = table_size(r, cap);
    if (n > budget) throw BudgetError("tabulation exceeds enumeration budget");
    std::vector<double> table(n);
    std::vector<int32_t> hood(static_cast<size_t>(2 * r + 1), 0);
    for (size_t idx = 0; idx < n; ++idx) {
        Configuration c(-r, {hood.begin(), hood.end()}, cap);
        table[idx] = model.rate(0, c);
        // advance the odometer
        for (size_t i = 0; i < hood.size(); ++i) {
            if (hood[i] < cap) {
                ++hood[i];
                break;
            }
            hood[i] = 0;
        }
    }
    return TableModel(r, cap, std::move(table));
}

double TableModel::rate(int64_t site, const Configuration& config) const {
    size_t idx = 0;
    const size_t base = static_cast<size_t>(cap_) + 1;
    for (int64_t d = range_; d >= -range_; --d)
        idx = idx * base + static_cast<size_t>(config.occupancy(site + d));
    return table_[idx];
}

std::string TableModel::describe() const {
    std::ostringstream os;
    os << "table(range=" << range_ << ",cap=" << cap_ << ")";
    return os.str();
}

WindowedModel::WindowedModel(std::shared_ptr<const RateModel> inner, int64_t lo, int64_t hi)
    : RateModel(inner->range(), inner->cap()), inner_(std::move(inner)), lo_(lo), hi_(hi) {
    if (lo > hi) throw Error("window is empty");
}

double WindowedModel::rate(int64_t site, const Configuration& config) const {
    if (site < lo_ || site > hi_) return 0.0;
    return inner_->rate(site, config);
}

std::string WindowedModel::describe() const {
    std::ostringstream os;
    os << "windowed[" << lo_ << "," << hi_ << "](" << inner_->describe() << ")";
    return os.str();
}

CallbackModel::CallbackModel(int32_t range, int32_t cap, Fn fn, std::string name,
                             int32_t dependence_range)
    : RateModel(range, cap),
      fn_(std::move(fn)),
      name_(std::move(name)),
      dep_range_(dependence_range < 0 ? range : dependence_range) {}

double CallbackModel::rate(int64_t site, const Configuration& config) const {
    return fn_(site, config);
}

}  // namespace lbp
