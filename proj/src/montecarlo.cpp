// SPDX-License-Identifier: Apache-2.0
#include "gkprep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "gkprep/amplify.hpp"
#include "gkprep/error.hpp"
#include "gkprep/rates.hpp"
#include "gkprep/stats.hpp"

namespace gkpr {

namespace {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double mean_of(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

// Sample covariance around known means.
double covariance(const std::vector<double>& a, double ma, const std::vector<double>& b, double mb) {
  if (a.size() < 2) return 0.0;
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
  return pairwise_sum(prod.data(), prod.size()) / static_cast<double>(a.size() - 1);
}

struct TrialRecord {
  double qber_sampled = 0.0;
  double qber_exact = 0.0;
  double completion = 0.0;
  // running summaries of the swaps of this trial
  long swaps = 0;
  double var_sum = 0.0, var_sumsq = 0.0, var_min = 0.0, var_max = 0.0;
  double wait_sum = 0.0, wait_sumsq = 0.0, wait_min = 0.0, wait_max = 0.0;
};

struct Setup {
  long n = 0;
  double p = 0.0;
  double alpha = 0.0;
  long T = 0;
  double base_variance = 0.0;  // 2 delta^2 + gamma^2
  AmplificationStrategy strategy = AmplificationStrategy::kPerStepPreamp;
  PauliModel model = PauliModel::kSimplified;
  long inner = 0;
  bool right_to_left = false;
};

TrialRecord run_trial(const Setup& s, std::uint64_t seed, long trial) {
  Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(trial));
  const ChainSample chain = sample_chain(s.n, s.p, rng, s.right_to_left);
  TrialRecord rec;
  rec.completion = static_cast<double>(chain.finish);
  std::vector<double> flips;
  flips.reserve(chain.swap_order.size());
  double log_parity = 0.0;
  for (long station : chain.swap_order) {
    const long wait = chain.waits[static_cast<std::size_t>(station - 1)];
    const double add = added_variance(s.strategy, wait, s.T, s.alpha);
    const double pp = std::min(0.5, pauli_error_prob(s.base_variance + add, s.model));
    flips.push_back(pp);
    log_parity += std::log1p(-2.0 * pp);
    const double w = static_cast<double>(wait);
    if (rec.swaps == 0) {
      rec.var_min = rec.var_max = add;
      rec.wait_min = rec.wait_max = w;
    }
    ++rec.swaps;
    rec.var_sum += add;
    rec.var_sumsq += add * add;
    rec.var_min = std::min(rec.var_min, add);
    rec.var_max = std::max(rec.var_max, add);
    rec.wait_sum += w;
    rec.wait_sumsq += w * w;
    rec.wait_min = std::min(rec.wait_min, w);
    rec.wait_max = std::max(rec.wait_max, w);
  }
  rec.qber_exact = flips.empty() ? 0.0 : -0.5 * std::expm1(log_parity);
  long odd = 0;
  if (!flips.empty()) {
    for (long it = 0; it < s.inner; ++it) {
      int parity = 0;
      for (double pp : flips) parity ^= rng.uniform() < pp ? 1 : 0;
      odd += parity;
    }
  }
  rec.qber_sampled = static_cast<double>(odd) / static_cast<double>(s.inner);
  return rec;
}

SummaryStats merge_summary(const std::vector<TrialRecord>& recs, bool variance_field) {
  SummaryStats out;
  std::vector<double> sums, sumsqs;
  sums.reserve(recs.size());
  sumsqs.reserve(recs.size());
  bool first = true;
  for (const auto& r : recs) {
    if (r.swaps == 0) continue;
    out.count += r.swaps;
    sums.push_back(variance_field ? r.var_sum : r.wait_sum);
    sumsqs.push_back(variance_field ? r.var_sumsq : r.wait_sumsq);
    const double lo = variance_field ? r.var_min : r.wait_min;
    const double hi = variance_field ? r.var_max : r.wait_max;
    out.min = first ? lo : std::min(out.min, lo);
    out.max = first ? hi : std::max(out.max, hi);
    first = false;
  }
  if (out.count == 0) return out;
  const double c = static_cast<double>(out.count);
  const double s = pairwise_sum(sums.data(), sums.size());
  const double ss = pairwise_sum(sumsqs.data(), sumsqs.size());
  out.mean = s / c;
  out.variance = out.count > 1 ? std::max(0.0, (ss - s * s / c) / (c - 1.0)) : 0.0;
  return out;
}

unsigned resolve_workers(unsigned requested, long trials) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<long>(w, trials));
}

}  // namespace

ChainSample sample_chain(long n, double p, Rng& rng, bool right_to_left_ties) {
  GKPR_REQUIRE(n >= 1, "n: segment count must be at least 1");
  GKPR_REQUIRE(p > 0 && p <= 1, "p: success probability must lie in (0, 1]");
  ChainSample c;
  c.completion.resize(static_cast<std::size_t>(n));
  for (auto& t : c.completion) t = rng.geometric(p);
  c.finish = *std::max_element(c.completion.begin(), c.completion.end());
  c.waits.resize(static_cast<std::size_t>(n - 1));
  c.swap_order.resize(static_cast<std::size_t>(n - 1));
  std::vector<long> ready(static_cast<std::size_t>(n - 1));
  for (long j = 1; j < n; ++j) {
    const long a = c.completion[static_cast<std::size_t>(j - 1)];
    const long b = c.completion[static_cast<std::size_t>(j)];
    c.waits[static_cast<std::size_t>(j - 1)] = a > b ? a - b : b - a;
    ready[static_cast<std::size_t>(j - 1)] = std::max(a, b);
  }
  // Stations swap in the step both neighbours hold pairs.
  std::iota(c.swap_order.begin(), c.swap_order.end(), 1L);
  std::stable_sort(c.swap_order.begin(), c.swap_order.end(), [&](long x, long y) {
    const long rx = ready[static_cast<std::size_t>(x - 1)];
    const long ry = ready[static_cast<std::size_t>(y - 1)];
    if (rx != ry) return rx < ry;
    return right_to_left_ties ? x > y : x < y;
  });
  return c;
}

SimulationStats simulate_chain(const RepeaterConfig& config, const SimulationOptions& options) {
  GKPR_REQUIRE(options.trials >= 1, "trials: must be at least 1");
  GKPR_REQUIRE(options.inner_iterations >= 1, "inner_iterations: must be at least 1");
  const DerivedParams d = derive(config);
  Setup s;
  s.n = config.segments;
  s.p = d.p;
  s.alpha = d.alpha;
  s.T = d.mean_wait_steps;
  s.base_variance = 2.0 * config.delta_sq + config.gamma_sq;
  s.strategy = resolve_strategy(config.strategy, config.p_link, config.t_coh_s, d.segment_km);
  s.model = options.model;
  s.inner = options.inner_iterations;
  s.right_to_left = options.right_to_left_ties;

  const long trials = options.trials;
  std::vector<TrialRecord> recs(static_cast<std::size_t>(trials));
  const unsigned workers = resolve_workers(options.workers, trials);
  auto work = [&](long begin, long end) {
    for (long t = begin; t < end; ++t) recs[static_cast<std::size_t>(t)] = run_trial(s, options.seed, t);
  };
  if (workers <= 1) {
    work(0, trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const long begin = static_cast<long>(w) * chunk;
      const long end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> q_sampled(recs.size()), q_exact(recs.size()), steps(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    q_sampled[i] = recs[i].qber_sampled;
    q_exact[i] = recs[i].qber_exact;
    steps[i] = recs[i].completion;
  }
  const double nt = static_cast<double>(trials);
  SimulationStats out;
  out.trials = trials;
  out.inner_iterations = options.inner_iterations;
  out.seed = options.seed;
  out.strategy = s.strategy;
  out.qber_mean = mean_of(q_sampled);
  out.qber_exact_mean = mean_of(q_exact);
  out.mean_completion_steps = mean_of(steps);
  const double var_q = covariance(q_sampled, out.qber_mean, q_sampled, out.qber_mean);
  const double var_qe = covariance(q_exact, out.qber_exact_mean, q_exact, out.qber_exact_mean);
  const double var_k = covariance(steps, out.mean_completion_steps, steps, out.mean_completion_steps);
  const double cov_qk = covariance(q_sampled, out.qber_mean, steps, out.mean_completion_steps);
  out.qber_stderr = std::sqrt(var_q / nt);
  out.qber_exact_stderr = std::sqrt(var_qe / nt);
  out.completion_stderr = std::sqrt(var_k / nt);
  out.per_swap_variance = merge_summary(recs, true);
  out.per_swap_wait = merge_summary(recs, false);

  // S = r(Q)/K; standard error from the delta method.
  const double Q = std::min(1.0, std::max(0.0, out.qber_mean));
  const double r = secret_fraction(Q, options.qber_limit);
  const double K = out.mean_completion_steps;
  out.S = r / K;
  double dr = 0.0;
  if (r > 0 && Q > 0) dr = -2.0 * std::log2((1.0 - Q) / Q);
  const double gq = dr / K;
  const double gk = -r / (K * K);
  const double var_s = (gq * gq * var_q + gk * gk * var_k + 2.0 * gq * gk * cov_qk) / nt;
  out.S_stderr = std::sqrt(std::max(0.0, var_s));
  out.S_hz = out.S / d.tau_s;
  return out;
}

NumericAverageResult numeric_average_qber(const RepeaterConfig& config, long truncation, PauliModel model) {
  GKPR_REQUIRE(truncation >= 1, "truncation: must be at least 1");
  const DerivedParams d = derive(config);
  NumericAverageResult out;
  out.strategy = resolve_strategy(config.strategy, config.p_link, config.t_coh_s, d.segment_km);
  const double base = 2.0 * config.delta_sq + config.gamma_sq;
  const double q = d.q;
  const double w0 = d.p / (1.0 + q);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(truncation));
  double qk = 1.0;
  for (long k = 0; k < truncation; ++k) {
    const double w = k == 0 ? w0 : 2.0 * w0 * qk;
    if (w == 0.0) break;
    const double add = added_variance(out.strategy, k, d.mean_wait_steps, d.alpha);
    terms.push_back(w * std::min(0.5, pauli_error_prob(base + add, model)));
    qk *= q;
  }
  out.p_pauli_mean = std::min(0.5, pairwise_sum(terms.data(), terms.size()));
  // P(X >= truncation) = 2 q^truncation / (1 + q)
  out.tail_mass = 2.0 * std::exp(static_cast<double>(truncation) * std::log1p(-d.p)) / (1.0 + q);
  if (d.p == 1.0) out.tail_mass = 0.0;
  if (out.tail_mass > 1e-9) {
    out.tail_warning = true;
    std::ostringstream os;
    os << "numeric average: waiting-time mass " << out.tail_mass << " lies beyond " << truncation
       << " summands";
    out.warning = os.str();
  }
  out.qber = qber(config.segments, out.p_pauli_mean);
  return out;
}

std::vector<ComparisonRow> compare_methods(const RepeaterConfig& config, const std::vector<double>& lengths_km,
                                           const SimulationOptions& options, long truncation) {
  GKPR_REQUIRE(!lengths_km.empty(), "L: comparison grid must be non-empty");
  std::vector<ComparisonRow> rows;
  rows.reserve(lengths_km.size());
  RateOptions ropt;
  ropt.model = options.model;
  ropt.qber_limit = options.qber_limit;
  for (double L : lengths_km) {
    RepeaterConfig c = config;
    c.length_km = L;
    ComparisonRow row;
    row.length_km = L;
    const RateResult analytic = analytic_rate(c, ropt);
    row.S_analytic = analytic.S;
    row.qber_analytic = analytic.qber;
    const NumericAverageResult num = numeric_average_qber(c, truncation, options.model);
    row.qber_numeric = num.qber;
    row.S_numeric = secret_fraction(num.qber, options.qber_limit) * analytic.R;
    const SimulationStats sim = simulate_chain(c, options);
    row.qber_simulated = sim.qber_mean;
    row.qber_simulated_stderr = sim.qber_stderr;
    row.S_simulated = sim.S;
    row.S_simulated_stderr = sim.S_stderr;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gkpr
