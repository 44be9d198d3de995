#include "lbp/functionals.hpp"

#include "lbp/errors.hpp"

namespace lbp {

Configuration embed_at_origin(const SeenFromTip& gamma) {
    if (gamma.values.empty()) throw Error("seen-from-tip value is empty");
    std::vector<int32_t> cells(gamma.values.rbegin(), gamma.values.rend());
    return Configuration(-(static_cast<int64_t>(gamma.values.size()) - 1), std::move(cells),
                         gamma.cap);
}

double drift_rate(const Configuration& config, const RateModel& model) {
    const int64_t tip = config.tip();
    double s = 0.0;
    for (int32_t k = 1; k <= model.range(); ++k)
        s += static_cast<double>(k) * model.rate(tip + k, config);
    return s;
}

double quadratic_rate(const Configuration& config, const RateModel& model) {
    const int64_t tip = config.tip();
    double s = 0.0;
    for (int32_t k = 1; k <= model.range(); ++k)
        s += static_cast<double>(k) * static_cast<double>(k) * model.rate(tip + k, config);
    return s;
}

double f_functional(const SeenFromTip& gamma, const RateModel& model) {
    return drift_rate(embed_at_origin(gamma), model);
}

double g_functional(const SeenFromTip& gamma, const RateModel& model) {
    return quadratic_rate(embed_at_origin(gamma), model);
}

}  // namespace lbp
