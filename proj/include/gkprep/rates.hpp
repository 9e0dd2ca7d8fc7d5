// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gkprep/amplify.hpp"
#include "gkprep/gkpcode.hpp"
#include "gkprep/model.hpp"

namespace gkpr {

struct RateResult {
  long n = 0;
  double p = 0.0;
  double alpha = 0.0;
  AmplificationStrategy strategy = AmplificationStrategy::kPerStepPreamp;  // after Auto resolution
  double sigma_add_sq = 0.0;  // expected added variance per swap
  double sigma_tot_sq = 0.0;
  double p_pauli = 0.0;
  double qber = 0.0;
  double r = 0.0;
  double K_bar = 0.0;  // mean completion time in steps
  double R = 0.0;      // 1 / K_bar
  double S = 0.0;      // r R, secret bits per step
  double S_hz = 0.0;   // S / tau
};

struct RateOptions {
  PauliModel model = PauliModel::kSimplified;
  ExpectationMode expectation = ExpectationMode::kClosedForm;  // mean-adjusted always uses numeric
  double qber_limit = kWorkingQberThreshold;
};

/// h(x) in bits.
double binary_entropy(double x);

/// max(0, 1 - 2h(qber)), forced to zero above qber_limit.
double secret_fraction(double qber, double qber_limit = kWorkingQberThreshold);

/// Expected-variance pipeline: derive, resolve the strategy, average the
/// added variance, then p_Pauli, QBER, r and R = 1/K_bar.
RateResult analytic_rate(const RepeaterConfig& config, const RateOptions& options = {},
                         const PhysicalConstants& constants = {});

/// Fills r, K_bar, R, S and S_hz of a result whose qber, n and segment
/// length are already known.
void finish_rate(RateResult& result, double segment_km, double qber_limit,
                 const PhysicalConstants& constants = {});

/// Repeaterless bound -log2(1 - e^{-L/L_att}) in bits per channel use.
double plob_bound(double length_km, const PhysicalConstants& constants = {});

/// How the depolarisation parameter of the correctionless scheme enters.
enum class NoiseMapping {
  kPerSegment,  // mu^n
  kPerSwap,     // mu^(n-1)
};

/// Scheme without error correction: the end-to-end fidelity decays with the
/// accumulated memory wait D_n through E[exp(-alpha D_n)], plus the minimal
/// step of every swap, and with mu per noisy element.
RateResult correctionless_rate(const RepeaterConfig& config, double mu,
                               NoiseMapping mapping = NoiseMapping::kPerSegment,
                               double qber_limit = kWorkingQberThreshold,
                               const PhysicalConstants& constants = {});

struct OptimizeResult {
  long n_star = 0;
  RateResult best;
  bool all_zero = false;  // S_hz = 0 for every n in range; n_star is then the lowest n
  long evaluations = 0;
};

/// Maximises S_hz over n in [n_min, n_max] at the config's L. Ties go to the
/// smallest n. Segment counts above the point where 2 delta^2 + gamma^2 alone
/// breaks the QBER limit are skipped since their rate is zero.
OptimizeResult optimize_n(const RepeaterConfig& config_template, long n_min, long n_max,
                          const RateOptions& options = {});

}  // namespace gkpr
