/* SPDX-License-Identifier: Apache-2.0 */
#ifndef GKPREP_GKPREP_H
#define GKPREP_GKPREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(GKPREP_BUILDING_LIBRARY)
#define GKPR_API __attribute__((visibility("default")))
#else
#define GKPR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gkpr_status {
  GKPR_OK = 0,
  GKPR_E_INVALID_ARGUMENT = 1,
  GKPR_E_ZERO_SUCCESS_PROBABILITY = 2,
  GKPR_E_SERIES_DIVERGENCE = 3,
  GKPR_E_NUMERIC_FAILURE = 4,
  GKPR_E_INTERNAL = 5
} gkpr_status;

typedef enum gkpr_strategy {
  GKPR_STRATEGY_PREAMP = 0,
  GKPR_STRATEGY_MEAN_ADJUSTED = 1,
  GKPR_STRATEGY_MEAN_ADJUSTED_LOSS = 2,
  GKPR_STRATEGY_CC = 3,
  GKPR_STRATEGY_AUTO = 4
} gkpr_strategy;

typedef enum gkpr_pauli_model {
  GKPR_PAULI_SIMPLIFIED = 0,
  GKPR_PAULI_STRIPED = 1
} gkpr_pauli_model;

typedef enum gkpr_noise_mapping {
  GKPR_MU_PER_SEGMENT = 0, /* mu^n */
  GKPR_MU_PER_SWAP = 1     /* mu^(n-1) */
} gkpr_noise_mapping;

typedef enum gkpr_detection {
  GKPR_DETECT_PSI_PLUS = 0,
  GKPR_DETECT_PSI_MINUS = 1,
  GKPR_DETECT_BUNCHED = 2,
  GKPR_DETECT_FORBIDDEN = 3,
  GKPR_DETECT_INVALID = 4
} gkpr_detection;

typedef enum gkpr_bell {
  GKPR_BELL_PHI_PLUS = 0,
  GKPR_BELL_PHI_MINUS = 1,
  GKPR_BELL_PSI_PLUS = 2,
  GKPR_BELL_PSI_MINUS = 3
} gkpr_bell;

/* Opaque chain configuration. Setters store values as given; validation
 * happens when the configuration is used and the error names the field. */
typedef struct gkpr_config gkpr_config;

typedef struct gkpr_derived {
  double segment_km;
  double tau_s;
  double alpha;
  double p;
  double q;
  long mean_wait_steps;
} gkpr_derived;

typedef struct gkpr_rate_options {
  int pauli_model;  /* gkpr_pauli_model */
  int closed_form;  /* nonzero: closed-form expected variance where one exists */
  double qber_limit;
} gkpr_rate_options;

typedef struct gkpr_rate_result {
  long n;
  double p;
  double alpha;
  int strategy; /* resolved gkpr_strategy */
  double sigma_add_sq;
  double sigma_tot_sq;
  double p_pauli;
  double qber;
  double r;
  double K_bar;
  double R;
  double S;
  double S_hz;
} gkpr_rate_result;

typedef struct gkpr_simulation_options {
  long trials;
  long inner_iterations;
  uint64_t seed;
  unsigned workers; /* 0: hardware concurrency */
  int pauli_model;
  double qber_limit;
} gkpr_simulation_options;

typedef struct gkpr_summary {
  long count;
  double mean;
  double variance;
  double min;
  double max;
} gkpr_summary;

typedef struct gkpr_simulation_stats {
  long trials;
  long inner_iterations;
  uint64_t seed;
  int strategy;
  double qber_mean;
  double qber_stderr;
  double qber_exact_mean;
  double qber_exact_stderr;
  double mean_completion_steps;
  double completion_stderr;
  gkpr_summary per_swap_variance;
  gkpr_summary per_swap_wait;
  double S;
  double S_stderr;
  double S_hz;
} gkpr_simulation_stats;

typedef struct gkpr_numeric_average {
  double p_pauli_mean;
  double qber;
  double tail_mass;
  int tail_warning;
  int strategy;
} gkpr_numeric_average;

typedef struct gkpr_compare_row {
  double length_km;
  double S_analytic;
  double S_numeric;
  double S_simulated;
  double S_simulated_stderr;
  double qber_analytic;
  double qber_numeric;
  double qber_simulated;
  double qber_simulated_stderr;
} gkpr_compare_row;

typedef struct gkpr_bell_decoding {
  int label; /* gkpr_bell */
  double x_shift;
  double p_shift;
  int x_parity;
  int p_parity;
} gkpr_bell_decoding;

typedef struct gkpr_tmsv_report {
  int all_symplectic;
  int exact_at_infinite_squeezing;
  int step_count;
  double max_symplectic_error;
  double measured_x[8];
  double measured_p[8];
  double residual_variance_x;
  double residual_variance_p;
} gkpr_tmsv_report;

/* Library */
GKPR_API const char* gkpr_version(void);
/* Message of the last failed call on this thread, "" when none. */
GKPR_API const char* gkpr_last_error(void);
GKPR_API const char* gkpr_status_name(gkpr_status status);
GKPR_API const char* gkpr_strategy_name(int strategy);
GKPR_API gkpr_status gkpr_parse_strategy(const char* name, int* out);

/* Configuration */
GKPR_API gkpr_status gkpr_config_create(gkpr_config** out);
GKPR_API gkpr_status gkpr_config_clone(const gkpr_config* config, gkpr_config** out);
GKPR_API void gkpr_config_destroy(gkpr_config* config);
GKPR_API gkpr_status gkpr_config_set_length_km(gkpr_config* config, double value);
GKPR_API gkpr_status gkpr_config_set_segments(gkpr_config* config, long value);
GKPR_API gkpr_status gkpr_config_set_p_link(gkpr_config* config, double value);
GKPR_API gkpr_status gkpr_config_set_delta_sq(gkpr_config* config, double value);
GKPR_API gkpr_status gkpr_config_set_t_coh(gkpr_config* config, double seconds);
GKPR_API gkpr_status gkpr_config_set_gamma_sq(gkpr_config* config, double value);
GKPR_API gkpr_status gkpr_config_set_strategy(gkpr_config* config, int strategy);
GKPR_API gkpr_status gkpr_config_set_n_atoms(gkpr_config* config, double value);
GKPR_API gkpr_status gkpr_config_set_theta_max(gkpr_config* config, double radians);
GKPR_API gkpr_status gkpr_config_get_length_km(const gkpr_config* config, double* out);
GKPR_API gkpr_status gkpr_config_get_segments(const gkpr_config* config, long* out);
GKPR_API gkpr_status gkpr_config_get_p_link(const gkpr_config* config, double* out);
GKPR_API gkpr_status gkpr_config_get_delta_sq(const gkpr_config* config, double* out);
GKPR_API gkpr_status gkpr_config_get_t_coh(const gkpr_config* config, double* out);
GKPR_API gkpr_status gkpr_config_get_gamma_sq(const gkpr_config* config, double* out);
GKPR_API gkpr_status gkpr_config_get_strategy(const gkpr_config* config, int* out);
GKPR_API gkpr_status gkpr_config_validate(const gkpr_config* config);
GKPR_API gkpr_status gkpr_derive(const gkpr_config* config, gkpr_derived* out);

/* Rates */
GKPR_API void gkpr_rate_options_default(gkpr_rate_options* out);
/* options may be NULL for the defaults. */
GKPR_API gkpr_status gkpr_analytic_rate(const gkpr_config* config, const gkpr_rate_options* options,
                                        gkpr_rate_result* out);
GKPR_API gkpr_status gkpr_correctionless_rate(const gkpr_config* config, double mu, int mapping,
                                              double qber_limit, gkpr_rate_result* out);
GKPR_API gkpr_status gkpr_optimize_n(const gkpr_config* config, long n_min, long n_max,
                                     const gkpr_rate_options* options, long* n_star,
                                     gkpr_rate_result* best, int* all_zero);
GKPR_API gkpr_status gkpr_plob_bound(double length_km, double* out);
GKPR_API gkpr_status gkpr_binary_entropy(double x, double* out);
GKPR_API gkpr_status gkpr_secret_fraction(double qber, double qber_limit, double* out);

/* Thresholds. found is set to 0 when the curves do not cross in range. */
GKPR_API gkpr_status gkpr_cc_threshold_L0(double p_link, double t_coh_s, double* out_km, int* found);
GKPR_API gkpr_status gkpr_gamma_threshold(long n, double delta_sq, double qber_limit, double* out);
GKPR_API gkpr_status gkpr_pauli_threshold(long n, double qber_limit, double* out);
GKPR_API double gkpr_working_qber_threshold(void);
GKPR_API double gkpr_exact_qber_threshold(void);

/* Noise model */
GKPR_API gkpr_status gkpr_pauli_error_prob(double sigma_tot_sq, int model, double* out);
GKPR_API gkpr_status gkpr_qber(long n, double p_pauli, double* out);
GKPR_API gkpr_status gkpr_hp_min_variance(double n_atoms, double theta_max, double* out);
GKPR_API gkpr_status gkpr_averaging_error_estimate(double delta_sq, double p, double alpha, double* out);

/* Amplification */
GKPR_API gkpr_status gkpr_added_variance(int strategy, long t_wait, long T, double alpha, double* out);
GKPR_API gkpr_status gkpr_expected_added_variance(int strategy, double p, double alpha, int closed_form,
                                                  double* out);

/* Waiting-time statistics */
GKPR_API gkpr_status gkpr_geom_abs_diff_pmf(long k, double p, double* out);
GKPR_API gkpr_status gkpr_geom_abs_diff_mean(double p, double* out);
GKPR_API gkpr_status gkpr_sum_waiting_pmf(long j, long m, double p, double* out);
GKPR_API gkpr_status gkpr_exp_dephasing_mean(long n, double p, double alpha, double* out);
GKPR_API gkpr_status gkpr_avg_total_steps(long n, double p, double* out);

/* Monte Carlo and numeric averaging */
GKPR_API void gkpr_simulation_options_default(gkpr_simulation_options* out);
GKPR_API gkpr_status gkpr_simulate(const gkpr_config* config, const gkpr_simulation_options* options,
                                   gkpr_simulation_stats* out);
GKPR_API gkpr_status gkpr_numeric_average_qber(const gkpr_config* config, long truncation, int model,
                                               gkpr_numeric_average* out);
/* rows must hold count entries. */
GKPR_API gkpr_status gkpr_compare_methods(const gkpr_config* config, const double* lengths_km, size_t count,
                                          const gkpr_simulation_options* options, long truncation,
                                          gkpr_compare_row* rows);

/* Protocol layer */
GKPR_API gkpr_status gkpr_classify_detection(const int counts[4], int* out);
GKPR_API gkpr_status gkpr_decode_bell_parities(double xbar_sum, double pbar_diff, gkpr_bell_decoding* out);
GKPR_API gkpr_status gkpr_compose_pauli_frame(const int* labels, size_t count, int* out);
GKPR_API gkpr_status gkpr_verify_tmsv_chain(double squeezing_r, gkpr_tmsv_report* out);
GKPR_API const char* gkpr_bell_name(int label);
GKPR_API const char* gkpr_detection_name(int outcome);

#ifdef __cplusplus
}
#endif

#endif /* GKPREP_GKPREP_H */
