#pragma once

#include "lbp/configuration.hpp"
#include "lbp/rate_model.hpp"

namespace lbp {

// Places a seen-from-tip value on the lattice with its tip at the origin and
// nothing below the recorded depths.
Configuration embed_at_origin(const SeenFromTip& gamma);

// Instantaneous drift of the tip: sum_{k=1..range} k * b(tip+k, eta).
// Integrated along a trajectory this is the compensator of the tip position.
double drift_rate(const Configuration& config, const RateModel& model);

// Second moment of the instantaneous tip displacement:
// sum_{k=1..range} k^2 * b(tip+k, eta). Integrated, the predictable
// quadratic variation of the tip martingale.
double quadratic_rate(const Configuration& config, const RateModel& model);

// Drift and second-moment functionals evaluated on the canonical embedding
// of a seen-from-tip value. When a saturated block sits within the model's
// dependence range of the tip, the embedding (which zeroes the block) can
// differ from the live-configuration drift; the simulator integrates the
// live form.
double f_functional(const SeenFromTip& gamma, const RateModel& model);
double g_functional(const SeenFromTip& gamma, const RateModel& model);

}  // namespace lbp
