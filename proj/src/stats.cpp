// SPDX-License-Identifier: Apache-2.0
#include "gkprep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gkprep/error.hpp"
#include "gkprep/stats_detail.hpp"

namespace gkpr {

namespace {

void require_probability(double p) {
  GKPR_REQUIRE(p > 0 && p <= 1, "p: success probability must lie in (0, 1] (got " + std::to_string(p) + ")");
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Neumaier compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double geom_abs_diff_pmf(long k, double p) {
  require_probability(p);
  GKPR_REQUIRE(k >= 0, "k: waiting time must be non-negative");
  const double q = 1.0 - p;
  // p^2 / (1 - q^2) = p / (1 + q)
  const double base = p / (1.0 + q);
  if (k == 0) return base;
  return 2.0 * base * std::pow(q, static_cast<double>(k));
}

double geom_abs_diff_mean(double p) {
  require_probability(p);
  const double q = 1.0 - p;
  return 2.0 * q / (p * (1.0 + q));
}

WaitingTimePmf tabulate_waiting_pmf(double p, double tail_tolerance, std::size_t max_entries) {
  require_probability(p);
  GKPR_REQUIRE(tail_tolerance > 0, "tail_tolerance must be positive");
  GKPR_REQUIRE(max_entries >= 1, "max_entries must be at least 1");
  const double q = 1.0 - p;
  WaitingTimePmf pmf;
  pmf.p = p;
  const double base = p / (1.0 + q);
  // P(X > K) = 2 q^{K+1} / (1 + q)
  double qk = 1.0;
  pmf.entries.push_back(base);
  pmf.tail_mass = 2.0 * q / (1.0 + q);
  while (pmf.tail_mass > tail_tolerance && pmf.entries.size() < max_entries) {
    qk *= q;
    pmf.entries.push_back(2.0 * base * qk);
    pmf.tail_mass = 2.0 * qk * q / (1.0 + q);
  }
  return pmf;
}

double sum_waiting_pmf(long j, long m, double p) {
  require_probability(p);
  GKPR_REQUIRE(m >= 1, "m: summand count must be at least 1");
  GKPR_REQUIRE(j >= 0, "j: total waiting time must be non-negative");
  const double q = 1.0 - p;
  const double log_base = std::log(p / (1.0 + q));
  if (j == 0) return std::exp(static_cast<double>(m) * log_base);
  if (q == 0.0) return 0.0;

  // log sum_{i=1}^{min(m,j)} 2^i C(m,i) C(j-1,i-1), via log-sum-exp.
  const long top = std::min(m, j);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(top));
  for (long i = 1; i <= top; ++i) {
    logs.push_back(i * std::log(2.0) + log_binomial(static_cast<double>(m), static_cast<double>(i)) +
                   log_binomial(static_cast<double>(j - 1), static_cast<double>(i - 1)));
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - peak);
  const double log_count = peak + std::log(acc);
  return std::exp(static_cast<double>(m) * log_base + static_cast<double>(j) * std::log(q) + log_count);
}

double exp_dephasing_mean(long n, double p, double alpha) {
  GKPR_REQUIRE(n >= 1, "n: segment count must be at least 1");
  require_probability(p);
  GKPR_REQUIRE(alpha >= 0, "alpha must be non-negative");
  if (n == 1 || alpha == 0.0) return 1.0;
  const double q = 1.0 - p;
  const double qa = q * std::exp(-alpha);
  // 1 - q e^{-alpha} = p - q expm1(-alpha), kept exact for small alpha.
  const double one_minus_qa = p - q * std::expm1(-alpha);
  const double log_base = std::log(p / (1.0 + q)) + std::log1p(qa) - std::log(one_minus_qa);
  return std::exp(static_cast<double>(n - 1) * log_base);
}

namespace detail {

double avg_total_steps_alternating(long n, double p) {
  const double log_q = std::log1p(-p);
  double binom = 1.0;
  CompensatedSum acc;
  for (long i = 1; i <= n; ++i) {
    binom = binom * static_cast<double>(n - i + 1) / static_cast<double>(i);
    const double one_minus_qi = -std::expm1(static_cast<double>(i) * log_q);
    const double term = binom / one_minus_qi;
    acc.add((i % 2 == 1) ? term : -term);
  }
  return acc.value();
}

double avg_total_steps_tail_sum(long n, double p) {
  // E[max] = 1 + sum_{k>=0} (1 - (1 - q^{k+1})^n)
  const double lambda = -std::log1p(-p);
  const double nn = static_cast<double>(n);
  CompensatedSum acc;
  acc.add(1.0);
  for (long k = 0;; ++k) {
    const double qk1 = std::exp(-lambda * static_cast<double>(k + 1));
    const double g = -std::expm1(nn * std::log1p(-qk1));
    acc.add(g);
    // Remaining terms are bounded by n q^{k+2} / p.
    if (nn * qk1 * (1.0 - p) / p < 1e-17 * acc.value()) break;
  }
  return acc.value();
}

double harmonic_number(long n) {
  if (n <= 10'000'000) {
    CompensatedSum acc;
    for (long i = n; i >= 1; --i) acc.add(1.0 / static_cast<double>(i));
    return acc.value();
  }
  const double x = static_cast<double>(n);
  constexpr double kEulerGamma = 0.57721566490153286061;
  return std::log(x) + kEulerGamma + 1.0 / (2 * x) - 1.0 / (12 * x * x) + 1.0 / (120 * x * x * x * x);
}

double avg_total_steps_asymptotic(long n, double p) {
  // Euler-Maclaurin on the tail sum with g(k) = 1 - (1 - q^{k+1})^n:
  //   integral = (H_n - sum_{i=1}^n p^i / i) / lambda
  //   boundary = g(0)/2 - g'(0)/12
  const double q = 1.0 - p;
  const double lambda = -std::log1p(-p);
  const double nn = static_cast<double>(n);
  double p_series = 0.0;
  double pi = 1.0;
  for (long i = 1; i <= n; ++i) {
    pi *= p;
    const double term = pi / static_cast<double>(i);
    p_series += term;
    if (term < 1e-18 * p_series) break;
  }
  const double pn = std::pow(p, nn);
  const double g0 = 1.0 - pn;
  const double dg0 = -nn * std::pow(p, nn - 1.0) * q * lambda;
  return 1.0 + (harmonic_number(n) - p_series) / lambda + 0.5 * g0 - dg0 / 12.0;
}

}  // namespace detail

double avg_total_steps(long n, double p) {
  GKPR_REQUIRE(n >= 1, "n: segment count must be at least 1");
  require_probability(p);
  if (p == 1.0) return 1.0;
  if (n == 1) return 1.0 / p;
  if (n <= detail::kAlternatingSumMaxSegments) return detail::avg_total_steps_alternating(n, p);
  const double lambda = -std::log1p(-p);
  const double terms = (std::log(static_cast<double>(n)) + 41.5) / lambda;
  if (terms <= detail::kTailSumMaxTerms) return detail::avg_total_steps_tail_sum(n, p);
  return detail::avg_total_steps_asymptotic(n, p);
}

}  // namespace gkpr
