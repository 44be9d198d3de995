#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lbp/configuration.hpp"
#include "lbp/kernel.hpp"

namespace lbp {

// Birth-rate function b(site, configuration). Immutable after construction;
// evaluation is pure, so instances may be shared across threads.
//
// Two radii are exposed. range() is the interaction radius: births happen
// exactly within range() of an occupied site (for well-behaved models), the
// tip never jumps further, and drift functionals sum over k = 1..range().
// dependence_range() is the locality radius: the rate at x depends only on
// occupancies within dependence_range() of x. For composite rates the two
// differ (a crowding penalty centered at the parent reaches one kernel
// radius beyond the dispersal radius).
class RateModel {
public:
    virtual ~RateModel() = default;

    virtual double rate(int64_t site, const Configuration& config) const = 0;
    virtual std::string describe() const = 0;

    int32_t range() const { return range_; }
    int32_t cap() const { return cap_; }
    virtual int32_t dependence_range() const { return range_; }

protected:
    RateModel(int32_t range, int32_t cap);

    int32_t range_;
    int32_t cap_;
};

// b(x, eta) = sum_y a(x-y) eta(y), zero at saturated sites.
class FreeBranchingModel final : public RateModel {
public:
    FreeBranchingModel(Kernel dispersal, int32_t cap);

    double rate(int64_t site, const Configuration& config) const override;
    std::string describe() const override;

    const Kernel& dispersal() const { return dispersal_; }

private:
    Kernel dispersal_;
};

// Parameters of the regulated rate. The establishment and fecundity kernels
// are stored as shapes and scaled by c_est / c_fec respectively.
struct FecEstParams {
    Kernel dispersal;      // a
    Kernel establishment;  // shape of the penalty around the birth site
    Kernel fecundity;      // shape of the penalty around the parent
    double c_fec = 0.0;
    double c_est = 0.0;
    int32_t cap = 1;
};

// b(x, eta) = exp(-sum_u est(u-x) eta(u))
//             * sum_y a(x-y) eta(y) exp(-sum_v fec(v-y) eta(v)),
// zero at saturated sites. est = c_est * establishment shape,
// fec = c_fec * fecundity shape.
class FecEstModel final : public RateModel {
public:
    explicit FecEstModel(FecEstParams params);

    double rate(int64_t site, const Configuration& config) const override;
    std::string describe() const override;
    int32_t dependence_range() const override { return dependence_range_; }

    const FecEstParams& params() const { return params_; }

private:
    FecEstParams params_;
    Kernel est_;  // scaled establishment kernel
    Kernel fec_;  // scaled fecundity kernel
    int32_t dependence_range_;
};

// Rate looked up from a dense table indexed by the occupancy pattern of
// [site-range, site+range]. Mostly used to tabulate other models and to
// build deliberately broken ones in tests.
class TableModel final : public RateModel {
public:
    TableModel(int32_t range, int32_t cap, std::vector<double> table);

    static TableModel tabulate(const RateModel& model, uint64_t budget = 100'000'000);
    static size_t table_size(int32_t range, int32_t cap);
    static size_t encode(const std::vector<int32_t>& neighborhood, int32_t cap);

    double rate(int64_t site, const Configuration& config) const override;
    std::string describe() const override;

    std::vector<double>& table() { return table_; }

private:
    std::vector<double> table_;
};

// Decorator zeroing the rate outside [lo, hi]. Restricted chains freeze once
// every window site saturates; used for exact comparisons against finite
// truncations.
class WindowedModel final : public RateModel {
public:
    WindowedModel(std::shared_ptr<const RateModel> inner, int64_t lo, int64_t hi);

    double rate(int64_t site, const Configuration& config) const override;
    std::string describe() const override;
    int32_t dependence_range() const override { return inner_->dependence_range(); }

private:
    std::shared_ptr<const RateModel> inner_;
    int64_t lo_, hi_;
};

// Arbitrary rate function; test scaffolding and one-off model variants.
class CallbackModel final : public RateModel {
public:
    using Fn = std::function<double(int64_t, const Configuration&)>;

    CallbackModel(int32_t range, int32_t cap, Fn fn, std::string name = "callback",
                  int32_t dependence_range = -1);

    double rate(int64_t site, const Configuration& config) const override;
    std::string describe() const override { return name_; }
    int32_t dependence_range() const override { return dep_range_; }

private:
    Fn fn_;
    std::string name_;
    int32_t dep_range_;
};

}  // namespace lbp
