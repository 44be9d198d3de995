#include "lbp/model_checks.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "lbp/errors.hpp"
#include "lbp/rng.hpp"

namespace lbp {

namespace {

constexpr size_t kMaxSamples = 8;

void record(ConditionReport& report, int64_t& counter, const std::string& what) {
    ++counter;
    if (report.samples.size() < kMaxSamples) report.samples.push_back(what);
}

// Random occupancy vector over [-width, width]; half the sites empty on
// average so that sparse and crowded neighborhoods both show up.
std::vector<int32_t> random_window(Xoshiro256pp& rng, int64_t width, int32_t cap) {
    std::vector<int32_t> cells(static_cast<size_t>(2 * width + 1));
    for (auto& c : cells) {
        if (rng.uniform() < 0.5)
            c = 0;
        else
            c = 1 + static_cast<int32_t>(rng.next() % static_cast<uint64_t>(cap));
    }
    return cells;
}

int64_t dist_to_occupied(const Configuration& config, int64_t x) {
    if (config.empty()) return INT64_MAX;
    int64_t best = INT64_MAX;
    for (int64_t site : config.occupied()) {
        const int64_t d = std::llabs(site - x);
        if (d < best) best = d;
    }
    return best;
}

}  // namespace

std::string ConditionReport::summary() const {
    std::ostringstream os;
    os << "trials=" << trials << " violations: locality=" << locality_violations
       << " translation=" << translation_violations << " cap=" << cap_rule_violations
       << " nondegeneracy=" << nondegeneracy_violations
       << " nonnegativity=" << nonnegativity_violations;
    return os.str();
}

ConditionReport check_conditions(const RateModel& model, int64_t trials, uint64_t seed) {
    if (trials < 1) throw Error("trials must be at least 1");
    ConditionReport report;
    report.trials = trials;

    const int32_t cap = model.cap();
    const int32_t range = model.range();
    const int64_t dep = model.dependence_range();
    const int64_t width = 2 * dep;  // window [-width, width]
    Xoshiro256pp rng(seed);

    for (int64_t trial = 0; trial < trials; ++trial) {
        std::vector<int32_t> cells = random_window(rng, width, cap);
        const Configuration config(-width, {cells.begin(), cells.end()}, cap);
        const int64_t x =
            static_cast<int64_t>(rng.next() % static_cast<uint64_t>(2 * dep + 1)) - dep;
        const double r = model.rate(x, config);

        // Nonnegativity and finiteness.
        if (!(r >= 0.0) || !std::isfinite(r)) {
            std::ostringstream os;
            os << "rate(" << x << ") = " << r << " on " << config.to_line();
            record(report, report.nonnegativity_violations, os.str());
            continue;
        }

        // Locality: re-randomizing sites farther than the dependence range
        // from x must not change the rate (bit-exact: same expression over
        // the same neighborhood).
        {
            std::vector<int32_t> mutated = cells;
            bool changed = false;
            for (int64_t z = -width; z <= width; ++z) {
                if (std::llabs(z - x) <= dep) continue;
                const auto i = static_cast<size_t>(z + width);
                const int32_t v = static_cast<int32_t>(rng.next() % static_cast<uint64_t>(cap + 1));
                changed |= v != mutated[i];
                mutated[i] = v;
            }
            if (changed) {
                const Configuration other(-width, {mutated.begin(), mutated.end()}, cap);
                const double r2 = model.rate(x, other);
                if (r2 != r) {
                    std::ostringstream os;
                    os << "locality: rate(" << x << ") " << r << " -> " << r2
                       << " after distant change";
                    record(report, report.locality_violations, os.str());
                }
            }
        }

        // Translation invariance, bit-exact.
        {
            const int64_t y =
                static_cast<int64_t>(rng.next() % static_cast<uint64_t>(6 * range + 1)) -
                3 * range;
            const double r2 = model.rate(x + y, config.shifted(y));
            if (r2 != r) {
                std::ostringstream os;
                os << "translation: rate(" << x << ") " << r << " != shifted " << r2;
                record(report, report.translation_violations, os.str());
            }
        }

        // Saturation rule: rate vanishes at a full site.
        {
            std::vector<int32_t> saturated = cells;
            saturated[static_cast<size_t>(x + width)] = cap;
            const Configuration full(-width, {saturated.begin(), saturated.end()}, cap);
            if (model.rate(x, full) != 0.0) {
                std::ostringstream os;
                os << "cap rule: positive rate at saturated site " << x;
                record(report, report.cap_rule_violations, os.str());
            }
        }

        // Non-degeneracy: positive exactly when an occupied site is within
        // range; saturated target sites are exempt (rate 0 allowed there).
        {
            const int64_t d = dist_to_occupied(config, x);
            const bool saturated = config.occupancy(x) >= cap;
            if (!saturated && d <= range && !(r > 0.0)) {
                std::ostringstream os;
                os << "non-degeneracy: zero rate at " << x << " with occupied site at distance "
                   << d;
                record(report, report.nondegeneracy_violations, os.str());
            }
            if (d > range && r != 0.0) {
                std::ostringstream os;
                os << "non-degeneracy: positive rate at " << x << " with nearest occupied at "
                   << d;
                record(report, report.nondegeneracy_violations, os.str());
            }
        }
    }
    return report;
}

RateBounds compute_bounds(const RateModel& model, uint64_t budget) {
    const int32_t cap = model.cap();
    const int32_t range = model.range();
    const int64_t dep = model.dependence_range();
    const size_t sites = static_cast<size_t>(2 * dep + 1);

    const uint64_t base = static_cast<uint64_t>(cap) + 1;
    uint64_t count = 1;
    bool over = false;
    for (size_t i = 0; i < sites && !over; ++i) {
        if (count > budget / base)
            over = true;
        else
            count *= base;
    }
    if (over || count > budget)
        throw BudgetError("enumeration infeasible: (cap+1)^(2*dep_range+1) exceeds budget");

    RateBounds bounds;
    bounds.upper = 0.0;
    bounds.lower = INFINITY;

    std::vector<int32_t> cells(sites, 0);
    for (uint64_t it = 0;; ++it) {
        const Configuration config(-dep, {cells.begin(), cells.end()}, cap);
        const double r = model.rate(0, config);
        if (r > bounds.upper) bounds.upper = r;
        if (cells[static_cast<size_t>(dep)] < cap) {
            // admissible birth site: origin below cap with an occupied
            // site within the interaction range
            bool near = false;
            for (int64_t z = -range; z <= range && !near; ++z)
                near = cells[static_cast<size_t>(z + dep)] > 0;
            if (near && r < bounds.lower) bounds.lower = r;
        }
        // odometer
        size_t i = 0;
        for (; i < sites; ++i) {
            if (cells[i] < cap) {
                ++cells[i];
                break;
            }
            cells[i] = 0;
        }
        if (i == sites) break;
    }
    if (!std::isfinite(bounds.lower)) bounds.lower = 0.0;
    return bounds;
}

}  // namespace lbp
