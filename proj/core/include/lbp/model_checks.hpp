#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbp/rate_model.hpp"

namespace lbp {

// Result of randomized verification of the model contract: locality (at the
// model's dependence range), translation invariance, the saturation rule,
// non-degeneracy (positive exactly within range() of an occupied site, with
// saturated sites exempt) and nonnegativity. Violations are recorded, not
// thrown.
struct ConditionReport {
    int64_t trials = 0;
    int64_t locality_violations = 0;
    int64_t translation_violations = 0;
    int64_t cap_rule_violations = 0;
    int64_t nondegeneracy_violations = 0;
    int64_t nonnegativity_violations = 0;
    std::vector<std::string> samples;  // first few violation descriptions

    int64_t total_violations() const {
        return locality_violations + translation_violations + cap_rule_violations +
               nondegeneracy_violations + nonnegativity_violations;
    }
    bool ok() const { return total_violations() == 0; }
    std::string summary() const;
};

ConditionReport check_conditions(const RateModel& model, int64_t trials, uint64_t seed);

// Exact extreme rates. upper = max rate at the origin over all configurations
// supported within the dependence range; lower = min over configurations with
// an occupied site within range() of the origin and the origin below cap.
struct RateBounds {
    double upper = 0.0;
    double lower = 0.0;
};

// Enumerates (cap+1)^(2*dependence_range+1) configurations; throws
// BudgetError when that exceeds `budget` evaluations.
RateBounds compute_bounds(const RateModel& model, uint64_t budget = 100'000'000);

}  // namespace lbp
