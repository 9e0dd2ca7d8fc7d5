// SPDX-License-Identifier: Apache-2.0
#include "gkprep/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gkprep/error.hpp"
#include "gkprep/stats.hpp"

namespace gkpr {

namespace {

constexpr long kExhaustiveSpan = 100'000;
constexpr int kScanPoints = 2000;

}  // namespace

double binary_entropy(double x) {
  GKPR_REQUIRE(x >= 0 && x <= 1, "x: binary entropy argument must lie in [0, 1] (got " + std::to_string(x) + ")");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log2(x) + (1.0 - x) * std::log1p(-x) / std::log(2.0));
}

double secret_fraction(double qber, double qber_limit) {
  GKPR_REQUIRE(qber >= 0 && qber <= 1, "qber: must lie in [0, 1]");
  if (qber > qber_limit) return 0.0;
  return std::max(0.0, 1.0 - 2.0 * binary_entropy(qber));
}

void finish_rate(RateResult& result, double segment_km, double qber_limit,
                 const PhysicalConstants& constants) {
  result.r = secret_fraction(result.qber, qber_limit);
  result.K_bar = avg_total_steps(result.n, result.p);
  result.R = 1.0 / result.K_bar;
  result.S = result.r * result.R;
  const double tau = segment_km / constants.c_fiber_km_per_s;
  result.S_hz = result.S / tau;
}

RateResult analytic_rate(const RepeaterConfig& config, const RateOptions& options,
                         const PhysicalConstants& constants) {
  const DerivedParams d = derive(config, constants);
  RateResult out;
  out.n = config.segments;
  out.p = d.p;
  out.alpha = d.alpha;
  out.strategy = resolve_strategy(config.strategy, config.p_link, config.t_coh_s, d.segment_km);
  const ExpectationMode mode = out.strategy == AmplificationStrategy::kMeanAdjusted
                                   ? ExpectationMode::kNumeric
                                   : options.expectation;
  out.sigma_add_sq = expected_added_variance(out.strategy, d.p, d.alpha, mode);
  out.sigma_tot_sq = make_budget(config.delta_sq, out.sigma_add_sq, config.gamma_sq).sigma_tot_sq;
  out.p_pauli = pauli_error_prob(out.sigma_tot_sq, options.model);
  // The simplified model exceeds 1/2 for very large variances; a flip
  // probability above 1/2 carries no extra information.
  out.qber = qber(out.n, std::min(out.p_pauli, 0.5));
  finish_rate(out, d.segment_km, options.qber_limit, constants);
  return out;
}

double plob_bound(double length_km, const PhysicalConstants& constants) {
  GKPR_REQUIRE(length_km > 0, "L: total distance must be positive");
  const double x = length_km / constants.attenuation_length_km;
  // -log2(1 - e^{-x}), accurate at both ends
  if (x < std::log(2.0)) return -std::log2(-std::expm1(-x));
  return -std::log1p(-std::exp(-x)) / std::log(2.0);
}

RateResult correctionless_rate(const RepeaterConfig& config, double mu, NoiseMapping mapping,
                               double qber_limit, const PhysicalConstants& constants) {
  GKPR_REQUIRE(mu > 0 && mu <= 1, "mu: depolarisation parameter must lie in (0, 1] (got " + std::to_string(mu) + ")");
  const DerivedParams d = derive(config, constants);
  const long n = config.segments;
  RateResult out;
  out.n = n;
  out.p = d.p;
  out.alpha = d.alpha;
  const double exponent = mapping == NoiseMapping::kPerSegment ? static_cast<double>(n)
                                                               : static_cast<double>(n - 1);
  const double log_fidelity = exponent * std::log(mu) + std::log(exp_dephasing_mean(n, d.p, d.alpha)) -
                              2.0 * d.alpha * static_cast<double>(n - 1);
  out.qber = -0.5 * std::expm1(log_fidelity);
  finish_rate(out, d.segment_km, qber_limit, constants);
  return out;
}

OptimizeResult optimize_n(const RepeaterConfig& config_template, long n_min, long n_max,
                          const RateOptions& options) {
  GKPR_REQUIRE(n_min >= 1 && n_min <= n_max, "n: optimisation range must be non-empty with n_min >= 1");
  validate(config_template);

  // Beyond this n the noise floor alone breaks the QBER limit.
  const double floor_pauli =
      std::min(0.5, pauli_error_prob(2.0 * config_template.delta_sq + config_template.gamma_sq, options.model));
  long hi = n_max;
  if (floor_pauli > 0) {
    const double bound = std::log1p(-2.0 * options.qber_limit) / std::log1p(-2.0 * floor_pauli);
    if (bound < static_cast<double>(n_max)) {
      hi = std::max(n_min, static_cast<long>(std::ceil(bound)) + 2);
      hi = std::min(hi, n_max);
    }
  }

  OptimizeResult out;
  auto evaluate = [&](long n) {
    RepeaterConfig c = config_template;
    c.segments = n;
    ++out.evaluations;
    try {
      return analytic_rate(c, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroSuccessProbability) throw;
      RateResult zero;
      zero.n = n;
      return zero;
    }
  };
  bool have = false;
  auto consider = [&](long n) {
    RateResult r = evaluate(n);
    if (!have || r.S_hz > out.best.S_hz || (r.S_hz == out.best.S_hz && n < out.n_star)) {
      out.best = r;
      out.n_star = n;
      have = true;
    }
    return r.S_hz;
  };
  auto sweep = [&](long a, long b) {
    for (long n = a; n <= b; ++n) consider(n);
  };

  if (hi - n_min <= kExhaustiveSpan) {
    sweep(n_min, hi);
  } else {
    // Log-spaced scan, then integer ternary search around the best grid point.
    std::vector<long> grid;
    const double la = std::log(static_cast<double>(n_min));
    const double lb = std::log(static_cast<double>(hi));
    for (int i = 0; i < kScanPoints; ++i) {
      const long n = static_cast<long>(std::llround(std::exp(la + (lb - la) * i / (kScanPoints - 1))));
      if (grid.empty() || n > grid.back()) grid.push_back(std::clamp(n, n_min, hi));
    }
    std::size_t best_i = 0;
    double best_s = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = consider(grid[i]);
      if (s > best_s) {
        best_s = s;
        best_i = i;
      }
    }
    long a = grid[best_i == 0 ? 0 : best_i - 1];
    long b = grid[std::min(best_i + 1, grid.size() - 1)];
    while (b - a > 64) {
      const long m1 = a + (b - a) / 3;
      const long m2 = b - (b - a) / 3;
      if (consider(m1) < consider(m2)) {
        a = m1;
      } else {
        b = m2;
      }
    }
    sweep(a, b);
    // The rate is flat near the optimum; re-centre until the best stops moving.
    for (long centre = -1; centre != out.n_star;) {
      centre = out.n_star;
      sweep(std::max(n_min, centre - 64), std::min(hi, centre + 64));
    }
  }

  out.all_zero = !(out.best.S_hz > 0);
  if (out.all_zero) {
    out.n_star = n_min;
    out.best = evaluate(n_min);
  }
  return out;
}

}  // namespace gkpr
