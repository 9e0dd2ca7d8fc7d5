// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace gkpr {

enum class PauliModel {
  kSimplified,  // everything outside the central stripe counts as an error
  kStriped,     // only the odd stripes flip the logical value
};

/// Working QBER limit for BB84 with one-way post-processing.
inline constexpr double kWorkingQberThreshold = 0.11;

/// Root of 1 - 2h(Q) = 0 in (0, 1/2), approximately 0.110028.
double exact_qber_threshold();

/// GKP noise parameters. Delta_sq is the envelope variance, 1/delta_sq under
/// the symmetric convention.
struct GkpNoiseParams {
  double delta_sq = 0.05;
  double Delta_sq = 20.0;
  double gamma_sq = 0.0;
};

GkpNoiseParams symmetric_noise(double delta_sq, double gamma_sq = 0.0);

/// Probability that the mod-sqrt(pi) syndrome decoding flips the logical
/// value for a centred Gaussian shift of variance sigma_tot_sq.
double pauli_error_prob(double sigma_tot_sq, PauliModel model = PauliModel::kSimplified);

/// d^2/ds^2 of the simplified pauli_error_prob at s = sigma_tot_sq.
double pauli_error_prob_second_derivative(double sigma_tot_sq);

/// End-to-end QBER after n - 1 swaps, each flipping with probability p_pauli.
double qber(long n, double p_pauli);

/// Per-swap error probability at which qber(n, .) reaches qber_limit.
double pauli_threshold(long n, double qber_limit = kWorkingQberThreshold);

/// Largest per-swap operation noise gamma^2 that keeps the chain at the QBER
/// limit in the infinite coherence time regime. Returns 0 when 2 delta^2
/// alone already exceeds it.
double gamma_threshold(long n, double delta_sq, double qber_limit = kWorkingQberThreshold);

/// Holstein-Primakoff lower bound on delta^2 for an ensemble of n_atoms with
/// rotation angles up to theta_max.
double hp_min_variance(double n_atoms, double theta_max);

/// Second-order estimate of E[p(sigma^2)] - p(E[sigma^2]) for per-step
/// preamplification.
double averaging_error_estimate(double delta_sq, double p, double alpha);

}  // namespace gkpr
