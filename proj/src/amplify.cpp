// SPDX-License-Identifier: Apache-2.0
#include "gkprep/amplify.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "gkprep/error.hpp"

namespace gkpr {

namespace {

// 1 - e^{-x} without cancellation.
double one_minus_exp(double x) { return -std::expm1(-x); }

constexpr double kTailTolerance = 1e-12;
constexpr long kMaxTerms = 200'000'000;

bool cc_preferred(double segment_km, double p_link, double t_coh_s, const PhysicalConstants& c) {
  const double p = segment_success_probability(p_link, segment_km, c);
  if (!(p > 0)) return false;
  const double alpha = segment_km / c.c_fiber_km_per_s / t_coh_s;
  const double cc = expected_added_variance(AmplificationStrategy::kCCAmplification, p, alpha,
                                            ExpectationMode::kNumeric);
  if (!std::isfinite(cc)) return false;
  const double pre = expected_added_variance(AmplificationStrategy::kPerStepPreamp, p, alpha,
                                             ExpectationMode::kNumeric);
  return cc < pre;
}

double numeric_expectation(AmplificationStrategy strategy, double p, double alpha) {
  const double q = 1.0 - p;
  const long T = rounded_mean_wait(q);
  const double base = p / (1.0 + q);
  const bool cc = strategy == AmplificationStrategy::kCCAmplification;
  if (cc && q > 0 && std::log(q) + alpha >= 0) return std::numeric_limits<double>::infinity();

  double sum = base * added_variance(strategy, 0, T, alpha);
  double carry = 0.0;
  double qk = 1.0;
  for (long k = 1;; ++k) {
    if (q == 0.0) break;
    qk *= q;
    const double w = 2.0 * base * qk;
    const double term = w * added_variance(strategy, k, T, alpha);
    const double t = sum + term;
    carry += (sum - t) + term;
    sum = t;
    const double tail = 2.0 * qk * q / (1.0 + q);
    if (tail <= kTailTolerance) {
      if (cc) {
        // The CC terms outgrow the pmf tail; add the rest of the series,
        // sum_{j>k} q^j (e^{(j+1)alpha} - 1), in closed form.
        const double qn = qk * q;
        const double rn = qn * std::exp(static_cast<double>(k + 1) * alpha);
        const double rest = std::exp(alpha) * rn / (p - q * std::expm1(alpha)) - qn / p;
        carry += 2.0 * base * rest;
      }
      break;
    }
    if (k >= kMaxTerms) {
      fail(ErrorCode::kNumericFailure,
           "expected_added_variance: numeric series did not converge within " +
               std::to_string(kMaxTerms) + " terms (p=" + std::to_string(p) + ")");
    }
  }
  return sum + carry;
}

}  // namespace

VarianceBudget make_budget(double delta_sq, double sigma_add_sq, double gamma_sq) {
  GKPR_REQUIRE(delta_sq >= 0 && sigma_add_sq >= 0 && gamma_sq >= 0,
          "variance budget: all variances must be non-negative");
  VarianceBudget b;
  b.sigma_add_sq = sigma_add_sq;
  b.sigma_bell_sq = delta_sq + 0.5 * sigma_add_sq;
  b.sigma_tot_sq = 2.0 * delta_sq + sigma_add_sq + gamma_sq;
  return b;
}

double added_variance(AmplificationStrategy strategy, long t_wait, long T, double alpha) {
  GKPR_REQUIRE(t_wait >= 0, "t_wait: waiting time must be non-negative (got " + std::to_string(t_wait) + ")");
  GKPR_REQUIRE(alpha >= 0, "alpha must be non-negative");
  const double t = static_cast<double>(t_wait);
  switch (strategy) {
    case AmplificationStrategy::kPerStepPreamp:
      return (t + 2.0) * one_minus_exp(alpha);
    case AmplificationStrategy::kMeanAdjusted:
    case AmplificationStrategy::kMeanAdjustedArtificialLoss: {
      GKPR_REQUIRE(T >= 0, "T: mean waiting time must be non-negative");
      const double head = one_minus_exp(static_cast<double>(T + 1) * alpha);
      if (t_wait <= T) {
        const long lag = strategy == AmplificationStrategy::kMeanAdjusted ? T - t_wait + 1 : 1;
        return head + one_minus_exp(static_cast<double>(lag) * alpha);
      }
      return head + static_cast<double>(t_wait - T + 1) * one_minus_exp(alpha);
    }
    case AmplificationStrategy::kCCAmplification:
      return std::expm1((t + 1.0) * alpha);
    case AmplificationStrategy::kAuto:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "strategy: auto must be resolved before evaluating variances");
}

double expected_added_variance(AmplificationStrategy strategy, double p, double alpha,
                               ExpectationMode mode) {
  GKPR_REQUIRE(p > 0 && p <= 1, "p: success probability must lie in (0, 1] (got " + std::to_string(p) + ")");
  GKPR_REQUIRE(alpha >= 0, "alpha must be non-negative");
  GKPR_REQUIRE(strategy != AmplificationStrategy::kAuto,
          "strategy: auto must be resolved before evaluating variances");
  if (mode == ExpectationMode::kNumeric) return numeric_expectation(strategy, p, alpha);

  const double q = 1.0 - p;
  const long T = rounded_mean_wait(q);
  switch (strategy) {
    case AmplificationStrategy::kPerStepPreamp:
      return static_cast<double>(T + 2) * alpha;
    case AmplificationStrategy::kMeanAdjustedArtificialLoss:
      return static_cast<double>(T + 2) * alpha +
             2.0 * alpha * std::pow(q, static_cast<double>(T + 1)) / (p * (1.0 + q));
    case AmplificationStrategy::kCCAmplification: {
      // 1 - q e^alpha = p - q (e^alpha - 1)
      const double denom = p - q * std::expm1(alpha);
      if (!(denom > 0)) {
        fail(ErrorCode::kSeriesDivergence,
             "series divergence: CC expectation requires q < exp(-alpha)");
      }
      // 2q e^{2a}/(1 - q e^a) - 2q/(1 - q), combined over a common denominator.
      const double tail = 2.0 * q * (p * std::expm1(2.0 * alpha) + q * std::expm1(alpha)) / (denom * p);
      return p / (1.0 + q) * (std::expm1(alpha) + tail);
    }
    case AmplificationStrategy::kMeanAdjusted:
      fail(ErrorCode::kInvalidArgument,
           "strategy: mean-adjusted has no closed-form expectation; use numeric mode");
    case AmplificationStrategy::kAuto:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "strategy: unsupported");
}

std::optional<double> cc_threshold_L0(double p_link, double t_coh_s, const PhysicalConstants& constants) {
  GKPR_REQUIRE(p_link > 0 && p_link <= 1, "p_link: link efficiency must lie in (0, 1]");
  GKPR_REQUIRE(t_coh_s > 0, "t_coh: coherence time must be positive");
  double lo = 0.1;
  double hi = 500.0;
  if (!cc_preferred(lo, p_link, t_coh_s, constants)) return std::nullopt;
  if (cc_preferred(hi, p_link, t_coh_s, constants)) return std::nullopt;
  while (hi - lo > 0.05) {
    const double mid = 0.5 * (lo + hi);
    if (cc_preferred(mid, p_link, t_coh_s, constants)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> cached_cc_threshold_L0(double p_link, double t_coh_s) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::optional<double>> cache;
  const auto key = std::make_pair(p_link, t_coh_s);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto value = cc_threshold_L0(p_link, t_coh_s);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, value);
  return value;
}

AmplificationStrategy resolve_strategy(AmplificationStrategy strategy, double p_link, double t_coh_s,
                                       double segment_km) {
  if (strategy != AmplificationStrategy::kAuto) return strategy;
  if (!std::isfinite(t_coh_s)) return AmplificationStrategy::kCCAmplification;
  const auto threshold = cached_cc_threshold_L0(p_link, t_coh_s);
  bool cc = false;
  if (threshold) {
    cc = segment_km < *threshold;
  } else {
    cc = cc_preferred(segment_km, p_link, t_coh_s, PhysicalConstants{});
  }
  return cc ? AmplificationStrategy::kCCAmplification : AmplificationStrategy::kPerStepPreamp;
}

}  // namespace gkpr
