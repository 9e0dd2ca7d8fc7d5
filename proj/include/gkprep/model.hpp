// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace gkpr {

/// Fiber constants. Lengths in km, times in seconds.
struct PhysicalConstants {
  double c_fiber_km_per_s = 2.0e5;   // two thirds of the vacuum speed of light
  double attenuation_length_km = 22.0;
};

enum class AmplificationStrategy {
  kPerStepPreamp,
  kMeanAdjusted,
  kMeanAdjustedArtificialLoss,
  kCCAmplification,
  kAuto,
};

std::string_view to_string(AmplificationStrategy s);
/// Accepts the names produced by to_string plus the short CLI aliases
/// ("preamp", "mean", "mean-loss", "cc", "auto"). Throws on anything else.
AmplificationStrategy parse_strategy(std::string_view name);

/// User-facing chain parameters.
struct RepeaterConfig {
  double length_km = 100.0;
  long segments = 4;
  double p_link = 0.7;
  double delta_sq = 0.05;
  double t_coh_s = 10.0;
  double gamma_sq = 0.0;
  AmplificationStrategy strategy = AmplificationStrategy::kAuto;
  std::optional<double> n_atoms;
  std::optional<double> theta_max;
};

/// Per-run quantities computed from a RepeaterConfig.
struct DerivedParams {
  double segment_km = 0.0;  // L0
  double tau_s = 0.0;       // duration of one time step
  double alpha = 0.0;       // tau / t_coh
  double p = 0.0;           // per-attempt distribution success probability
  double q = 0.0;           // 1 - p
  long mean_wait_steps = 0; // T, the rounded mean of |N1 - N2|
};

/// Throws Error(kInvalidArgument) naming the offending field.
void validate(const RepeaterConfig& config);

/// Rounds 2q/(1-q^2) half-up to the nearest integer.
long rounded_mean_wait(double q);

/// Success probability p_link * exp(-L0 / L_att).
double segment_success_probability(double p_link, double segment_km,
                                   const PhysicalConstants& constants = {});

/// Throws Error(kZeroSuccessProbability) when p evaluates to zero.
DerivedParams derive(const RepeaterConfig& config, const PhysicalConstants& constants = {});

}  // namespace gkpr
