// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <limits>
#include <string_view>
#include <vector>

#include "gkprep/rng.hpp"

namespace gkpr {

/// Photon counts in the modes (a_H, a_V, b_H, b_V).
struct DetectionPattern {
  std::array<int, 4> counts{};
};

enum class DetectionOutcome { kPsiPlus, kPsiMinus, kBunched, kForbidden, kInvalid };

enum class BellLabel { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

std::string_view to_string(DetectionOutcome o);
std::string_view to_string(BellLabel b);

/// Canonical representatives of the measured quadratures modulo sqrt(pi).
struct Syndrome {
  double x_shift = 0.0;  // in (-sqrt(pi)/2, sqrt(pi)/2]
  double p_shift = 0.0;
  int x_parity = 0;
  int p_parity = 0;
};

struct BellDecoding {
  BellLabel label = BellLabel::kPhiPlus;
  Syndrome syndrome;
};

DetectionOutcome classify_detection(const DetectionPattern& pattern);

/// Decodes rescaled homodyne outcomes: xbar_sum estimates x_A + x_B and
/// pbar_diff estimates p_A - p_B, both already divided by the beam-splitter
/// factor. Odd multiples of sqrt(pi) in xbar_sum mean Psi, odd multiples in
/// pbar_diff mean minus.
BellDecoding decode_bell_parities(double xbar_sum, double pbar_diff);

/// Group product in the Klein four-group of Bell labels, with PsiPlus as
/// the identity.
BellLabel compose(BellLabel a, BellLabel b);

/// Folds compose over a non-empty sequence.
BellLabel compose_pauli_frame(const std::vector<BellLabel>& frames);

using Symplectic8 = std::array<double, 64>;  // row major, (xA,pA,xB,pB,xC,pC,xD,pD)

struct TmsvStep {
  std::string_view name;
  Symplectic8 matrix{};
  double symplectic_error = 0.0;  // max |S^T Omega S - Omega|
  double determinant = 0.0;
};

struct TmsvReport {
  std::vector<TmsvStep> steps;
  Symplectic8 total{};
  std::array<double, 8> measured_x{};  // final row of x_C
  std::array<double, 8> measured_p{};  // final row of x_D
  bool all_symplectic = false;
  bool exact_at_infinite_squeezing = false;
  double squeezing_r = 0.0;
  double residual_variance_x = 0.0;  // noise left on x_A + x_B
  double residual_variance_p = 0.0;  // noise left on p_A - p_B
};

/// Builds the quadrature transform of the TMSV-mediated Bell measurement and
/// checks it step by step. r is the TMSV squeezing parameter.
TmsvReport verify_tmsv_chain(double squeezing_r = std::numeric_limits<double>::infinity());

/// One segment's distribution: number of attempts until success.
long distribution_attempt(Rng& rng, double p);

}  // namespace gkpr
