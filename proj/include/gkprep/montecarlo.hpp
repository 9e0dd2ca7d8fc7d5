// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkprep/gkpcode.hpp"
#include "gkprep/model.hpp"
#include "gkprep/rng.hpp"

namespace gkpr {

struct SimulationOptions {
  long trials = 5000;
  long inner_iterations = 1000;
  std::uint64_t seed = 42;
  unsigned workers = 0;  // 0: hardware concurrency
  PauliModel model = PauliModel::kSimplified;
  double qber_limit = kWorkingQberThreshold;
  bool right_to_left_ties = false;  // tie order for swaps completing in the same step
};

struct SummaryStats {
  long count = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double min = 0.0;
  double max = 0.0;
};

struct SimulationStats {
  long trials = 0;
  long inner_iterations = 0;
  std::uint64_t seed = 0;
  AmplificationStrategy strategy = AmplificationStrategy::kPerStepPreamp;
  double qber_mean = 0.0;          // parity-sampled
  double qber_stderr = 0.0;
  double qber_exact_mean = 0.0;    // from the per-trial flip probabilities
  double qber_exact_stderr = 0.0;
  double mean_completion_steps = 0.0;
  double completion_stderr = 0.0;
  SummaryStats per_swap_variance;  // sigma_add^2 of every swap
  SummaryStats per_swap_wait;
  double S = 0.0;  // r(qber_mean) / mean_completion_steps
  double S_stderr = 0.0;
  double S_hz = 0.0;
};

/// One realisation of the segment completion times and the swap schedule.
struct ChainSample {
  std::vector<long> completion;      // per segment, >= 1
  std::vector<long> swap_order;      // station indices 1..n-1 in execution order
  std::vector<long> waits;           // waits[j-1] = |N_{j-1} - N_j| at station j
  long finish = 0;                   // max completion
};

ChainSample sample_chain(long n, double p, Rng& rng, bool right_to_left_ties = false);

/// Discrete-time swap-as-soon-as-possible simulation. Results depend only on
/// (config, trials, inner_iterations, seed, model), not on the worker count.
SimulationStats simulate_chain(const RepeaterConfig& config, const SimulationOptions& options = {});

struct NumericAverageResult {
  double p_pauli_mean = 0.0;
  double qber = 0.0;
  double tail_mass = 0.0;  // waiting-time mass beyond the truncation
  bool tail_warning = false;
  std::string warning;
  AmplificationStrategy strategy = AmplificationStrategy::kPerStepPreamp;
};

/// Averages p_Pauli over the waiting-time law term by term, then applies the
/// QBER binomial. Flags a warning when the cut tail exceeds 1e-9.
NumericAverageResult numeric_average_qber(const RepeaterConfig& config, long truncation = 50000,
                                          PauliModel model = PauliModel::kSimplified);

struct ComparisonRow {
  double length_km = 0.0;
  double S_analytic = 0.0;
  double S_numeric = 0.0;
  double S_simulated = 0.0;
  double S_simulated_stderr = 0.0;
  double qber_analytic = 0.0;
  double qber_numeric = 0.0;
  double qber_simulated = 0.0;
  double qber_simulated_stderr = 0.0;
};

/// Evaluates the three rate methods on each L of the grid.
std::vector<ComparisonRow> compare_methods(const RepeaterConfig& config, const std::vector<double>& lengths_km,
                                           const SimulationOptions& options = {}, long truncation = 50000);

}  // namespace gkpr
