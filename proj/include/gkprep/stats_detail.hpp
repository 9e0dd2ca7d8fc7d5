// SPDX-License-Identifier: Apache-2.0
#pragma once

// Evaluation routes behind avg_total_steps, exposed for cross-checking.

namespace gkpr::detail {

inline constexpr long kAlternatingSumMaxSegments = 30;
inline constexpr double kTailSumMaxTerms = 5.0e6;

double avg_total_steps_alternating(long n, double p);
double avg_total_steps_tail_sum(long n, double p);
double avg_total_steps_asymptotic(long n, double p);
double harmonic_number(long n);

}  // namespace gkpr::detail
