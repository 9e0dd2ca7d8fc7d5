// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace gkpr {

/// Waiting-time law of |N1 - N2| for two independent geometric variables
/// (support >= 1) with success probability p, tabulated until the remaining
/// mass drops below the requested tolerance.
struct WaitingTimePmf {
  double p = 1.0;
  std::vector<double> entries;  // entries[k] = P(|N1 - N2| = k)
  double tail_mass = 0.0;       // 1 - sum(entries)
};

/// P(|N1 - N2| = k). Throws for p outside (0, 1] or negative k.
double geom_abs_diff_pmf(long k, double p);

/// E|N1 - N2| = 2q / (1 - q^2).
double geom_abs_diff_mean(double p);

/// Tabulates geom_abs_diff_pmf until the tail mass is at most tail_tolerance
/// or max_entries is reached (tail_mass then records what was cut).
WaitingTimePmf tabulate_waiting_pmf(double p, double tail_tolerance = 1e-12,
                                    std::size_t max_entries = 50'000'000);

/// P(X_1 + ... + X_m = j) for m independent copies of |N1 - N2|.
/// Evaluated in log space so that large j and m do not overflow.
double sum_waiting_pmf(long j, long m, double p);

/// Closed form of E[exp(-alpha D_n)] where D_n is a sum of n-1 independent
/// waiting times.
double exp_dephasing_mean(long n, double p, double alpha);

/// Mean number of steps until all n segments have succeeded, i.e. the mean of
/// the maximum of n geometric variables.
double avg_total_steps(long n, double p);

}  // namespace gkpr
