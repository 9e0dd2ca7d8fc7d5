// SPDX-License-Identifier: Apache-2.0
#include "gkprep/model.hpp"

#include <cmath>
#include <sstream>

#include "gkprep/error.hpp"

namespace gkpr {

std::string_view to_string(AmplificationStrategy s) {
  switch (s) {
    case AmplificationStrategy::kPerStepPreamp: return "preamp";
    case AmplificationStrategy::kMeanAdjusted: return "mean";
    case AmplificationStrategy::kMeanAdjustedArtificialLoss: return "mean-loss";
    case AmplificationStrategy::kCCAmplification: return "cc";
    case AmplificationStrategy::kAuto: return "auto";
  }
  return "unknown";
}

AmplificationStrategy parse_strategy(std::string_view name) {
  if (name == "preamp" || name == "per-step-preamp") return AmplificationStrategy::kPerStepPreamp;
  if (name == "mean" || name == "mean-adjusted") return AmplificationStrategy::kMeanAdjusted;
  if (name == "mean-loss" || name == "mean-adjusted-loss")
    return AmplificationStrategy::kMeanAdjustedArtificialLoss;
  if (name == "cc" || name == "cc-amplification") return AmplificationStrategy::kCCAmplification;
  if (name == "auto") return AmplificationStrategy::kAuto;
  fail(ErrorCode::kInvalidArgument, "strategy: unknown value '" + std::string(name) + "'");
}

namespace {

template <class T>
std::string field_message(const char* field, const char* rule, T value) {
  std::ostringstream os;
  os << field << ": " << rule << " (got " << value << ")";
  return os.str();
}

}  // namespace

void validate(const RepeaterConfig& c) {
  GKPR_REQUIRE(std::isfinite(c.length_km) && c.length_km > 0,
          field_message("L", "total distance must be positive", c.length_km));
  GKPR_REQUIRE(c.segments >= 1, field_message("n", "segment count must be at least 1", c.segments));
  GKPR_REQUIRE(c.p_link >= 0 && c.p_link <= 1,
          field_message("p_link", "link efficiency must lie in [0, 1]", c.p_link));
  GKPR_REQUIRE(std::isfinite(c.delta_sq) && c.delta_sq > 0,
          field_message("delta_sq", "GKP peak variance must be positive", c.delta_sq));
  GKPR_REQUIRE(c.t_coh_s > 0, field_message("t_coh", "coherence time must be positive", c.t_coh_s));
  GKPR_REQUIRE(std::isfinite(c.gamma_sq) && c.gamma_sq >= 0,
          field_message("gamma_sq", "operation noise variance must be non-negative", c.gamma_sq));
  if (c.n_atoms) {
    GKPR_REQUIRE(*c.n_atoms >= 1, field_message("n_atoms", "ensemble size must be at least 1", *c.n_atoms));
  }
  if (c.theta_max) {
    GKPR_REQUIRE(*c.theta_max > 0, field_message("theta_max", "angle bound must be positive", *c.theta_max));
  }
}

long rounded_mean_wait(double q) {
  // 2q/(1-q^2) = 2q/((1-q)(1+q)); floor(x + 1/2) is half-up for x >= 0.
  const double mean = 2.0 * q / ((1.0 - q) * (1.0 + q));
  return static_cast<long>(std::floor(mean + 0.5));
}

double segment_success_probability(double p_link, double segment_km,
                                   const PhysicalConstants& constants) {
  return p_link * std::exp(-segment_km / constants.attenuation_length_km);
}

DerivedParams derive(const RepeaterConfig& config, const PhysicalConstants& constants) {
  validate(config);
  DerivedParams d;
  d.segment_km = config.length_km / static_cast<double>(config.segments);
  d.tau_s = d.segment_km / constants.c_fiber_km_per_s;
  d.alpha = d.tau_s / config.t_coh_s;
  d.p = segment_success_probability(config.p_link, d.segment_km, constants);
  if (!(d.p > 0)) {
    fail(ErrorCode::kZeroSuccessProbability,
         "zero success probability: p_link * exp(-L0/L_att) evaluates to 0");
  }
  d.q = 1.0 - d.p;
  d.mean_wait_steps = rounded_mean_wait(d.q);
  return d;
}

}  // namespace gkpr
