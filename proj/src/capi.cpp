// SPDX-License-Identifier: Apache-2.0
#include "gkprep/gkprep.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "gkprep/amplify.hpp"
#include "gkprep/error.hpp"
#include "gkprep/gkpcode.hpp"
#include "gkprep/model.hpp"
#include "gkprep/montecarlo.hpp"
#include "gkprep/protocol.hpp"
#include "gkprep/rates.hpp"
#include "gkprep/stats.hpp"

struct gkpr_config {
  gkpr::RepeaterConfig value;
};

namespace {

thread_local std::string g_last_error;

gkpr_status to_status(gkpr::ErrorCode code) {
  switch (code) {
    case gkpr::ErrorCode::kInvalidArgument: return GKPR_E_INVALID_ARGUMENT;
    case gkpr::ErrorCode::kZeroSuccessProbability: return GKPR_E_ZERO_SUCCESS_PROBABILITY;
    case gkpr::ErrorCode::kSeriesDivergence: return GKPR_E_SERIES_DIVERGENCE;
    case gkpr::ErrorCode::kNumericFailure: return GKPR_E_NUMERIC_FAILURE;
  }
  return GKPR_E_INTERNAL;
}

template <class F>
gkpr_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return GKPR_OK;
  } catch (const gkpr::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GKPR_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GKPR_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return GKPR_E_INTERNAL;
  }
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr) gkpr::fail(gkpr::ErrorCode::kInvalidArgument, std::string(name) + ": null pointer");
}

gkpr::AmplificationStrategy to_strategy(int s) {
  if (s < GKPR_STRATEGY_PREAMP || s > GKPR_STRATEGY_AUTO) {
    gkpr::fail(gkpr::ErrorCode::kInvalidArgument, "strategy: unknown value " + std::to_string(s));
  }
  return static_cast<gkpr::AmplificationStrategy>(s);
}

gkpr::PauliModel to_model(int m) {
  if (m != GKPR_PAULI_SIMPLIFIED && m != GKPR_PAULI_STRIPED) {
    gkpr::fail(gkpr::ErrorCode::kInvalidArgument, "pauli_model: unknown value " + std::to_string(m));
  }
  return m == GKPR_PAULI_STRIPED ? gkpr::PauliModel::kStriped : gkpr::PauliModel::kSimplified;
}

gkpr::RateOptions to_rate_options(const gkpr_rate_options* o) {
  gkpr::RateOptions r;
  if (o == nullptr) return r;
  r.model = to_model(o->pauli_model);
  r.expectation = o->closed_form ? gkpr::ExpectationMode::kClosedForm : gkpr::ExpectationMode::kNumeric;
  r.qber_limit = o->qber_limit;
  return r;
}

gkpr::SimulationOptions to_sim_options(const gkpr_simulation_options* o) {
  gkpr::SimulationOptions s;
  if (o == nullptr) return s;
  s.trials = o->trials;
  s.inner_iterations = o->inner_iterations;
  s.seed = o->seed;
  s.workers = o->workers;
  s.model = to_model(o->pauli_model);
  s.qber_limit = o->qber_limit;
  return s;
}

void fill(const gkpr::RateResult& r, gkpr_rate_result* out) {
  out->n = r.n;
  out->p = r.p;
  out->alpha = r.alpha;
  out->strategy = static_cast<int>(r.strategy);
  out->sigma_add_sq = r.sigma_add_sq;
  out->sigma_tot_sq = r.sigma_tot_sq;
  out->p_pauli = r.p_pauli;
  out->qber = r.qber;
  out->r = r.r;
  out->K_bar = r.K_bar;
  out->R = r.R;
  out->S = r.S;
  out->S_hz = r.S_hz;
}

void fill(const gkpr::SummaryStats& s, gkpr_summary* out) {
  out->count = s.count;
  out->mean = s.mean;
  out->variance = s.variance;
  out->min = s.min;
  out->max = s.max;
}

template <class T>
gkpr_status set_field(gkpr_config* config, T gkpr::RepeaterConfig::*field, T value) {
  return guard([&] {
    need(config, "config");
    config->value.*field = value;
  });
}

template <class T>
gkpr_status get_field(const gkpr_config* config, T gkpr::RepeaterConfig::*field, T* out) {
  return guard([&] {
    need(config, "config");
    need(out, "out");
    *out = config->value.*field;
  });
}

template <class F>
gkpr_status scalar(double* out, F&& f) {
  return guard([&] {
    need(out, "out");
    *out = f();
  });
}

}  // namespace

extern "C" {

const char* gkpr_version(void) { return "0.1.0"; }

const char* gkpr_last_error(void) { return g_last_error.c_str(); }

const char* gkpr_status_name(gkpr_status status) {
  switch (status) {
    case GKPR_OK: return "ok";
    case GKPR_E_INVALID_ARGUMENT: return "invalid argument";
    case GKPR_E_ZERO_SUCCESS_PROBABILITY: return "zero success probability";
    case GKPR_E_SERIES_DIVERGENCE: return "series divergence";
    case GKPR_E_NUMERIC_FAILURE: return "numeric failure";
    case GKPR_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gkpr_strategy_name(int strategy) {
  if (strategy < GKPR_STRATEGY_PREAMP || strategy > GKPR_STRATEGY_AUTO) return "unknown";
  return gkpr::to_string(static_cast<gkpr::AmplificationStrategy>(strategy)).data();
}

gkpr_status gkpr_parse_strategy(const char* name, int* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<int>(gkpr::parse_strategy(name));
  });
}

gkpr_status gkpr_config_create(gkpr_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new gkpr_config{};
  });
}

gkpr_status gkpr_config_clone(const gkpr_config* config, gkpr_config** out) {
  return guard([&] {
    need(config, "config");
    need(out, "out");
    *out = new gkpr_config{config->value};
  });
}

void gkpr_config_destroy(gkpr_config* config) { delete config; }

gkpr_status gkpr_config_set_length_km(gkpr_config* c, double v) {
  return set_field(c, &gkpr::RepeaterConfig::length_km, v);
}
gkpr_status gkpr_config_set_segments(gkpr_config* c, long v) {
  return set_field(c, &gkpr::RepeaterConfig::segments, v);
}
gkpr_status gkpr_config_set_p_link(gkpr_config* c, double v) {
  return set_field(c, &gkpr::RepeaterConfig::p_link, v);
}
gkpr_status gkpr_config_set_delta_sq(gkpr_config* c, double v) {
  return set_field(c, &gkpr::RepeaterConfig::delta_sq, v);
}
gkpr_status gkpr_config_set_t_coh(gkpr_config* c, double v) {
  return set_field(c, &gkpr::RepeaterConfig::t_coh_s, v);
}
gkpr_status gkpr_config_set_gamma_sq(gkpr_config* c, double v) {
  return set_field(c, &gkpr::RepeaterConfig::gamma_sq, v);
}

gkpr_status gkpr_config_set_strategy(gkpr_config* c, int strategy) {
  return guard([&] {
    need(c, "config");
    c->value.strategy = to_strategy(strategy);
  });
}

gkpr_status gkpr_config_set_n_atoms(gkpr_config* c, double v) {
  return guard([&] {
    need(c, "config");
    c->value.n_atoms = v;
  });
}

gkpr_status gkpr_config_set_theta_max(gkpr_config* c, double v) {
  return guard([&] {
    need(c, "config");
    c->value.theta_max = v;
  });
}

gkpr_status gkpr_config_get_length_km(const gkpr_config* c, double* out) {
  return get_field(c, &gkpr::RepeaterConfig::length_km, out);
}
gkpr_status gkpr_config_get_segments(const gkpr_config* c, long* out) {
  return get_field(c, &gkpr::RepeaterConfig::segments, out);
}
gkpr_status gkpr_config_get_p_link(const gkpr_config* c, double* out) {
  return get_field(c, &gkpr::RepeaterConfig::p_link, out);
}
gkpr_status gkpr_config_get_delta_sq(const gkpr_config* c, double* out) {
  return get_field(c, &gkpr::RepeaterConfig::delta_sq, out);
}
gkpr_status gkpr_config_get_t_coh(const gkpr_config* c, double* out) {
  return get_field(c, &gkpr::RepeaterConfig::t_coh_s, out);
}
gkpr_status gkpr_config_get_gamma_sq(const gkpr_config* c, double* out) {
  return get_field(c, &gkpr::RepeaterConfig::gamma_sq, out);
}

gkpr_status gkpr_config_get_strategy(const gkpr_config* c, int* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    *out = static_cast<int>(c->value.strategy);
  });
}

gkpr_status gkpr_config_validate(const gkpr_config* c) {
  return guard([&] {
    need(c, "config");
    gkpr::validate(c->value);
  });
}

gkpr_status gkpr_derive(const gkpr_config* c, gkpr_derived* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    const auto d = gkpr::derive(c->value);
    *out = gkpr_derived{d.segment_km, d.tau_s, d.alpha, d.p, d.q, d.mean_wait_steps};
  });
}

void gkpr_rate_options_default(gkpr_rate_options* out) {
  if (out == nullptr) return;
  out->pauli_model = GKPR_PAULI_SIMPLIFIED;
  out->closed_form = 1;
  out->qber_limit = gkpr::kWorkingQberThreshold;
}

gkpr_status gkpr_analytic_rate(const gkpr_config* c, const gkpr_rate_options* options, gkpr_rate_result* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    fill(gkpr::analytic_rate(c->value, to_rate_options(options)), out);
  });
}

gkpr_status gkpr_correctionless_rate(const gkpr_config* c, double mu, int mapping, double qber_limit,
                                     gkpr_rate_result* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    if (mapping != GKPR_MU_PER_SEGMENT && mapping != GKPR_MU_PER_SWAP) {
      gkpr::fail(gkpr::ErrorCode::kInvalidArgument, "mapping: unknown value " + std::to_string(mapping));
    }
    const auto m = mapping == GKPR_MU_PER_SWAP ? gkpr::NoiseMapping::kPerSwap : gkpr::NoiseMapping::kPerSegment;
    fill(gkpr::correctionless_rate(c->value, mu, m, qber_limit), out);
  });
}

gkpr_status gkpr_optimize_n(const gkpr_config* c, long n_min, long n_max, const gkpr_rate_options* options,
                            long* n_star, gkpr_rate_result* best, int* all_zero) {
  return guard([&] {
    need(c, "config");
    need(n_star, "n_star");
    const auto r = gkpr::optimize_n(c->value, n_min, n_max, to_rate_options(options));
    *n_star = r.n_star;
    if (best != nullptr) fill(r.best, best);
    if (all_zero != nullptr) *all_zero = r.all_zero ? 1 : 0;
  });
}

gkpr_status gkpr_plob_bound(double length_km, double* out) {
  return scalar(out, [&] { return gkpr::plob_bound(length_km); });
}

gkpr_status gkpr_binary_entropy(double x, double* out) {
  return scalar(out, [&] { return gkpr::binary_entropy(x); });
}

gkpr_status gkpr_secret_fraction(double qber, double qber_limit, double* out) {
  return scalar(out, [&] { return gkpr::secret_fraction(qber, qber_limit); });
}

gkpr_status gkpr_cc_threshold_L0(double p_link, double t_coh_s, double* out_km, int* found) {
  return guard([&] {
    need(out_km, "out_km");
    need(found, "found");
    const auto v = gkpr::cc_threshold_L0(p_link, t_coh_s);
    *found = v ? 1 : 0;
    *out_km = v ? *v : std::nan("");
  });
}

gkpr_status gkpr_gamma_threshold(long n, double delta_sq, double qber_limit, double* out) {
  return scalar(out, [&] { return gkpr::gamma_threshold(n, delta_sq, qber_limit); });
}

gkpr_status gkpr_pauli_threshold(long n, double qber_limit, double* out) {
  return scalar(out, [&] { return gkpr::pauli_threshold(n, qber_limit); });
}

double gkpr_working_qber_threshold(void) { return gkpr::kWorkingQberThreshold; }

double gkpr_exact_qber_threshold(void) { return gkpr::exact_qber_threshold(); }

gkpr_status gkpr_pauli_error_prob(double sigma_tot_sq, int model, double* out) {
  return scalar(out, [&] { return gkpr::pauli_error_prob(sigma_tot_sq, to_model(model)); });
}

gkpr_status gkpr_qber(long n, double p_pauli, double* out) {
  return scalar(out, [&] { return gkpr::qber(n, p_pauli); });
}

gkpr_status gkpr_hp_min_variance(double n_atoms, double theta_max, double* out) {
  return scalar(out, [&] { return gkpr::hp_min_variance(n_atoms, theta_max); });
}

gkpr_status gkpr_averaging_error_estimate(double delta_sq, double p, double alpha, double* out) {
  return scalar(out, [&] { return gkpr::averaging_error_estimate(delta_sq, p, alpha); });
}

gkpr_status gkpr_added_variance(int strategy, long t_wait, long T, double alpha, double* out) {
  return scalar(out, [&] { return gkpr::added_variance(to_strategy(strategy), t_wait, T, alpha); });
}

gkpr_status gkpr_expected_added_variance(int strategy, double p, double alpha, int closed_form, double* out) {
  return scalar(out, [&] {
    return gkpr::expected_added_variance(
        to_strategy(strategy), p, alpha,
        closed_form ? gkpr::ExpectationMode::kClosedForm : gkpr::ExpectationMode::kNumeric);
  });
}

gkpr_status gkpr_geom_abs_diff_pmf(long k, double p, double* out) {
  return scalar(out, [&] { return gkpr::geom_abs_diff_pmf(k, p); });
}

gkpr_status gkpr_geom_abs_diff_mean(double p, double* out) {
  return scalar(out, [&] { return gkpr::geom_abs_diff_mean(p); });
}

gkpr_status gkpr_sum_waiting_pmf(long j, long m, double p, double* out) {
  return scalar(out, [&] { return gkpr::sum_waiting_pmf(j, m, p); });
}

gkpr_status gkpr_exp_dephasing_mean(long n, double p, double alpha, double* out) {
  return scalar(out, [&] { return gkpr::exp_dephasing_mean(n, p, alpha); });
}

gkpr_status gkpr_avg_total_steps(long n, double p, double* out) {
  return scalar(out, [&] { return gkpr::avg_total_steps(n, p); });
}

void gkpr_simulation_options_default(gkpr_simulation_options* out) {
  if (out == nullptr) return;
  const gkpr::SimulationOptions d;
  out->trials = d.trials;
  out->inner_iterations = d.inner_iterations;
  out->seed = d.seed;
  out->workers = d.workers;
  out->pauli_model = GKPR_PAULI_SIMPLIFIED;
  out->qber_limit = d.qber_limit;
}

gkpr_status gkpr_simulate(const gkpr_config* c, const gkpr_simulation_options* options,
                          gkpr_simulation_stats* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    const auto s = gkpr::simulate_chain(c->value, to_sim_options(options));
    out->trials = s.trials;
    out->inner_iterations = s.inner_iterations;
    out->seed = s.seed;
    out->strategy = static_cast<int>(s.strategy);
    out->qber_mean = s.qber_mean;
    out->qber_stderr = s.qber_stderr;
    out->qber_exact_mean = s.qber_exact_mean;
    out->qber_exact_stderr = s.qber_exact_stderr;
    out->mean_completion_steps = s.mean_completion_steps;
    out->completion_stderr = s.completion_stderr;
    fill(s.per_swap_variance, &out->per_swap_variance);
    fill(s.per_swap_wait, &out->per_swap_wait);
    out->S = s.S;
    out->S_stderr = s.S_stderr;
    out->S_hz = s.S_hz;
  });
}

gkpr_status gkpr_numeric_average_qber(const gkpr_config* c, long truncation, int model, gkpr_numeric_average* out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    const auto r = gkpr::numeric_average_qber(c->value, truncation, to_model(model));
    out->p_pauli_mean = r.p_pauli_mean;
    out->qber = r.qber;
    out->tail_mass = r.tail_mass;
    out->tail_warning = r.tail_warning ? 1 : 0;
    out->strategy = static_cast<int>(r.strategy);
  });
}

gkpr_status gkpr_compare_methods(const gkpr_config* c, const double* lengths_km, size_t count,
                                 const gkpr_simulation_options* options, long truncation, gkpr_compare_row* rows) {
  return guard([&] {
    need(c, "config");
    need(lengths_km, "lengths_km");
    need(rows, "rows");
    const std::vector<double> grid(lengths_km, lengths_km + count);
    const auto table = gkpr::compare_methods(c->value, grid, to_sim_options(options), truncation);
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto& t = table[i];
      rows[i] = gkpr_compare_row{t.length_km,   t.S_analytic,    t.S_numeric,
                                 t.S_simulated, t.S_simulated_stderr, t.qber_analytic,
                                 t.qber_numeric, t.qber_simulated, t.qber_simulated_stderr};
    }
  });
}

gkpr_status gkpr_classify_detection(const int counts[4], int* out) {
  return guard([&] {
    need(counts, "counts");
    need(out, "out");
    gkpr::DetectionPattern pattern;
    std::copy(counts, counts + 4, pattern.counts.begin());
    *out = static_cast<int>(gkpr::classify_detection(pattern));
  });
}

gkpr_status gkpr_decode_bell_parities(double xbar_sum, double pbar_diff, gkpr_bell_decoding* out) {
  return guard([&] {
    need(out, "out");
    const auto d = gkpr::decode_bell_parities(xbar_sum, pbar_diff);
    *out = gkpr_bell_decoding{static_cast<int>(d.label), d.syndrome.x_shift, d.syndrome.p_shift,
                              d.syndrome.x_parity, d.syndrome.p_parity};
  });
}

gkpr_status gkpr_compose_pauli_frame(const int* labels, size_t count, int* out) {
  return guard([&] {
    need(labels, "labels");
    need(out, "out");
    std::vector<gkpr::BellLabel> frames;
    frames.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (labels[i] < GKPR_BELL_PHI_PLUS || labels[i] > GKPR_BELL_PSI_MINUS) {
        gkpr::fail(gkpr::ErrorCode::kInvalidArgument, "labels: unknown Bell label " + std::to_string(labels[i]));
      }
      frames.push_back(static_cast<gkpr::BellLabel>(labels[i]));
    }
    *out = static_cast<int>(gkpr::compose_pauli_frame(frames));
  });
}

gkpr_status gkpr_verify_tmsv_chain(double squeezing_r, gkpr_tmsv_report* out) {
  return guard([&] {
    need(out, "out");
    const auto r = gkpr::verify_tmsv_chain(squeezing_r);
    out->all_symplectic = r.all_symplectic ? 1 : 0;
    out->exact_at_infinite_squeezing = r.exact_at_infinite_squeezing ? 1 : 0;
    out->step_count = static_cast<int>(r.steps.size());
    out->max_symplectic_error = 0.0;
    for (const auto& s : r.steps) out->max_symplectic_error = std::max(out->max_symplectic_error, s.symplectic_error);
    std::copy(r.measured_x.begin(), r.measured_x.end(), out->measured_x);
    std::copy(r.measured_p.begin(), r.measured_p.end(), out->measured_p);
    out->residual_variance_x = r.residual_variance_x;
    out->residual_variance_p = r.residual_variance_p;
  });
}

const char* gkpr_bell_name(int label) {
  if (label < GKPR_BELL_PHI_PLUS || label > GKPR_BELL_PSI_MINUS) return "unknown";
  return gkpr::to_string(static_cast<gkpr::BellLabel>(label)).data();
}

const char* gkpr_detection_name(int outcome) {
  if (outcome < GKPR_DETECT_PSI_PLUS || outcome > GKPR_DETECT_INVALID) return "unknown";
  return gkpr::to_string(static_cast<gkpr::DetectionOutcome>(outcome)).data();
}

}  // extern "C"
