// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "gkprep/model.hpp"

namespace gkpr {

enum class ExpectationMode { kClosedForm, kNumeric };

/// Additive Gaussian-shift variances entering one swap.
struct VarianceBudget {
  double sigma_add_sq = 0.0;
  double sigma_bell_sq = 0.0;  // variance carried by one Bell pair: delta_sq + sigma_add_sq / 2
  double sigma_tot_sq = 0.0;   // 2 delta_sq + sigma_add_sq + gamma_sq
};

VarianceBudget make_budget(double delta_sq, double sigma_add_sq, double gamma_sq = 0.0);

/// Added shift variance for one realisation of the waiting time t_wait.
/// T is only read by the mean-adjusted strategies. kAuto is rejected.
double added_variance(AmplificationStrategy strategy, long t_wait, long T, double alpha);

/// E[sigma_add^2] over the waiting-time law of |N1 - N2|.
///
/// Closed form throws kSeriesDivergence for CC when q >= e^{-alpha}, and
/// kInvalidArgument for the unmodified mean-adjusted strategy, which has none.
/// Numeric mode sums the tabulated pmf (tail mass 1e-12); for CC with
/// q e^{alpha} >= 1 the expectation is infinite and +inf is returned.
double expected_added_variance(AmplificationStrategy strategy, double p, double alpha,
                               ExpectationMode mode);

/// Segment length below which CC amplification has the smaller expected
/// variance than per-step preamplification. std::nullopt when the two do not
/// cross inside (0.1 km, 500 km).
std::optional<double> cc_threshold_L0(double p_link, double t_coh_s,
                                      const PhysicalConstants& constants = {});

/// Cached variant of cc_threshold_L0, keyed on (p_link, t_coh_s) for the
/// default constants. Thread safe.
std::optional<double> cached_cc_threshold_L0(double p_link, double t_coh_s);

/// Maps kAuto to CC or preamp from the cached threshold; other strategies pass
/// through unchanged.
AmplificationStrategy resolve_strategy(AmplificationStrategy strategy, double p_link,
                                       double t_coh_s, double segment_km);

}  // namespace gkpr
