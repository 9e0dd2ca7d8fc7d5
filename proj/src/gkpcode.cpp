// SPDX-License-Identifier: Apache-2.0
#include "gkprep/gkpcode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gkprep/error.hpp"
#include "gkprep/rates.hpp"

namespace gkpr {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrtPi = std::sqrt(kPi);

double striped_direct(double s) {
  // Odd stripes [(2k+1)sqrt(pi) - sqrt(pi)/2, (2k+1)sqrt(pi) + sqrt(pi)/2],
  // both signs folded together, written as the mass outside the central
  // stripe minus the even stripes so that the result never exceeds the
  // simplified model after rounding.
  const double scale = 1.0 / std::sqrt(2.0 * s);
  double even = 0.0;
  for (long k = 1;; ++k) {
    const double a = (2.0 * k - 0.5) * kSqrtPi * scale;
    const double b = (2.0 * k + 0.5) * kSqrtPi * scale;
    even += std::erfc(a) - std::erfc(b);
    if (a > 27.0) break;
  }
  return std::erfc(std::sqrt(kPi / (8.0 * s))) - even;
}

double striped_fourier(double s) {
  // Fourier series of the odd-stripe indicator against the Gaussian
  // characteristic function.
  double acc = 0.0;
  for (long m = 1;; m += 2) {
    const double decay = std::exp(-static_cast<double>(m) * m * kPi * s / 2.0);
    const double sign = ((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    acc += sign * decay / static_cast<double>(m);
    if (decay < 1e-18) break;
  }
  return 0.5 - 2.0 / kPi * acc;
}

}  // namespace

double exact_qber_threshold() {
  double lo = 0.05;
  double hi = 0.2;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - 2.0 * binary_entropy(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GkpNoiseParams symmetric_noise(double delta_sq, double gamma_sq) {
  GKPR_REQUIRE(delta_sq > 0, "delta_sq: GKP peak variance must be positive");
  return GkpNoiseParams{delta_sq, 1.0 / delta_sq, gamma_sq};
}

double pauli_error_prob(double sigma_tot_sq, PauliModel model) {
  GKPR_REQUIRE(sigma_tot_sq > 0, "sigma_tot_sq: variance must be positive (got " + std::to_string(sigma_tot_sq) + ")");
  if (std::isinf(sigma_tot_sq)) return model == PauliModel::kSimplified ? 1.0 : 0.5;
  if (model == PauliModel::kSimplified) return std::erfc(std::sqrt(kPi / (8.0 * sigma_tot_sq)));
  return sigma_tot_sq < 1.0 ? striped_direct(sigma_tot_sq) : striped_fourier(sigma_tot_sq);
}

double pauli_error_prob_second_derivative(double s) {
  GKPR_REQUIRE(s > 0, "sigma_tot_sq: variance must be positive");
  return std::exp(-kPi / (8.0 * s)) / std::sqrt(8.0) *
         (kPi / 8.0 * std::pow(s, -3.5) - 1.5 * std::pow(s, -2.5));
}

double qber(long n, double p_pauli) {
  GKPR_REQUIRE(n >= 1, "n: segment count must be at least 1");
  GKPR_REQUIRE(p_pauli >= 0 && p_pauli <= 0.5, "p_pauli: must lie in [0, 1/2]");
  if (n == 1) return 0.0;
  // 1/2 [1 - (1 - 2p)^{n-1}]
  return -0.5 * std::expm1(static_cast<double>(n - 1) * std::log1p(-2.0 * p_pauli));
}

double pauli_threshold(long n, double qber_limit) {
  GKPR_REQUIRE(n >= 2, "n: threshold needs at least one swap (n >= 2)");
  GKPR_REQUIRE(qber_limit > 0 && qber_limit < 0.5, "qber_limit: must lie in (0, 1/2)");
  return -0.5 * std::expm1(std::log1p(-2.0 * qber_limit) / static_cast<double>(n - 1));
}

double gamma_threshold(long n, double delta_sq, double qber_limit) {
  GKPR_REQUIRE(delta_sq > 0, "delta_sq: GKP peak variance must be positive");
  const double target = pauli_threshold(n, qber_limit);
  const double base = 2.0 * delta_sq;
  auto excess = [&](double g) { return pauli_error_prob(base + g) - target; };
  if (excess(0.0) >= 0) return 0.0;
  double lo = 0.0;
  double hi = 0.1;
  while (excess(hi) < 0) hi *= 2.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double hp_min_variance(double n_atoms, double theta_max) {
  GKPR_REQUIRE(n_atoms >= 1, "n_atoms: ensemble size must be at least 1");
  GKPR_REQUIRE(theta_max > 0, "theta_max: angle bound must be positive");
  return 1.0 / (n_atoms * theta_max * theta_max);
}

double averaging_error_estimate(double delta_sq, double p, double alpha) {
  GKPR_REQUIRE(delta_sq > 0, "delta_sq: GKP peak variance must be positive");
  GKPR_REQUIRE(p > 0 && p <= 1, "p: success probability must lie in (0, 1]");
  GKPR_REQUIRE(alpha >= 0, "alpha must be non-negative");
  const double q = 1.0 - p;
  const double loss = -std::expm1(-alpha);
  const double one_minus_q2 = p * (1.0 + q);
  const double var_wait = 2.0 * q / (p * p) - 4.0 * q * q / (one_minus_q2 * one_minus_q2);
  return 0.5 * pauli_error_prob_second_derivative(2.0 * delta_sq) * loss * loss * var_wait;
}

}  // namespace gkpr
