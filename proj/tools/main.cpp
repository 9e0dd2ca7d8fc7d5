// SPDX-License-Identifier: Apache-2.0
// gkprep: command-line front end over the C interface.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "gkprep/gkprep.h"

using namespace gkpr::cli;

namespace {

void check(gkpr_status status) {
  if (status == GKPR_OK) return;
  const int code = (status == GKPR_E_INVALID_ARGUMENT || status == GKPR_E_ZERO_SUCCESS_PROBABILITY)
                       ? kExitValidation
                       : kExitNumeric;
  throw CliError(code, gkpr_last_error());
}

struct ConfigDeleter {
  void operator()(gkpr_config* c) const { gkpr_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<gkpr_config, ConfigDeleter>;

// Field names mirror the configuration record.
const std::vector<std::string> kFields = {"L", "n", "p_link", "delta_sq", "t_coh", "gamma_sq",
                                          "strategy", "n_atoms", "theta_max"};

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 42;
  unsigned workers = 0;
  std::map<std::string, std::string> flags;  // field -> raw range text given on the command line

  // command specific
  long trials = 5000;
  long inner = 1000;
  long truncation = 50000;
  long n_min = 1;
  long n_max = 1'000'000'000;
  std::string mu = "1";
  std::string mapping = "per-segment";
  std::string pauli_model = "simplified";
  std::string expectation = "closed";
  bool exact_threshold = false;
};

struct Point {
  double L = 100;
  long n = 4;
  double p_link = 0.7;
  double delta_sq = 0.05;
  double t_coh = 10;
  double gamma_sq = 0;
  int strategy = GKPR_STRATEGY_AUTO;
  std::optional<double> n_atoms;
  std::optional<double> theta_max;
};

std::string json_scalar_to_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  throw CliError(kExitValidation, key + ": expected a number or a range string in the config file");
}

// Merges the config file (if any) with command-line flags; flags win.
std::map<std::string, std::string> resolve_fields(const Options& opt,
                                                  const std::map<std::string, std::string>& defaults) {
  std::map<std::string, std::string> values = defaults;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw CliError(kExitValidation, "config: cannot open '" + opt.config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw CliError(kExitValidation, std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CliError(kExitValidation, "config: top level must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
        throw CliError(kExitValidation, "config: unknown field '" + key + "'");
      }
      values[key] = json_scalar_to_text(value, key);
    }
  }
  for (const auto& [key, value] : opt.flags) values[key] = value;
  return values;
}

int strategy_code(const std::string& name) {
  int code = 0;
  check(gkpr_parse_strategy(name.c_str(), &code));
  return code;
}

// Cartesian product of every numeric field, the last field varying fastest.
std::vector<Point> expand(const std::map<std::string, std::string>& v) {
  auto grid = [&](const char* key) { return parse_grid(v.at(key), key); };
  const auto Ls = grid("L");
  const auto ns = parse_int_grid(v.at("n"), "n");
  const auto pls = grid("p_link");
  const auto ds = grid("delta_sq");
  const auto ts = grid("t_coh");
  const auto gs = grid("gamma_sq");
  Point base;
  base.strategy = strategy_code(v.at("strategy"));
  if (auto it = v.find("n_atoms"); it != v.end()) base.n_atoms = parse_grid(it->second, "n_atoms").front();
  if (auto it = v.find("theta_max"); it != v.end()) base.theta_max = parse_grid(it->second, "theta_max").front();
  std::vector<Point> out;
  for (double L : Ls)
    for (long n : ns)
      for (double pl : pls)
        for (double d : ds)
          for (double t : ts)
            for (double g : gs) {
              Point p = base;
              p.L = L;
              p.n = n;
              p.p_link = pl;
              p.delta_sq = d;
              p.t_coh = t;
              p.gamma_sq = g;
              out.push_back(p);
            }
  return out;
}

ConfigPtr make_config(const Point& p) {
  gkpr_config* raw = nullptr;
  check(gkpr_config_create(&raw));
  ConfigPtr c(raw);
  check(gkpr_config_set_length_km(raw, p.L));
  check(gkpr_config_set_segments(raw, p.n));
  check(gkpr_config_set_p_link(raw, p.p_link));
  check(gkpr_config_set_delta_sq(raw, p.delta_sq));
  check(gkpr_config_set_t_coh(raw, p.t_coh));
  check(gkpr_config_set_gamma_sq(raw, p.gamma_sq));
  check(gkpr_config_set_strategy(raw, p.strategy));
  if (p.n_atoms) check(gkpr_config_set_n_atoms(raw, *p.n_atoms));
  if (p.theta_max) check(gkpr_config_set_theta_max(raw, *p.theta_max));
  check(gkpr_config_validate(raw));
  return c;
}

Record inputs(const Point& p, bool with_n = true) {
  Record r;
  r.add("L_km", p.L);
  if (with_n) r.add("n", p.n);
  r.add("p_link", p.p_link).add("delta_sq", p.delta_sq).add("t_coh_s", p.t_coh).add("gamma_sq", p.gamma_sq);
  r.add("strategy", std::string(gkpr_strategy_name(p.strategy)));
  return r;
}

void add_rate(Record& r, const gkpr_rate_result& x, const std::string& prefix = "") {
  r.add(prefix + "p", x.p).add(prefix + "alpha", x.alpha);
  r.add(prefix + "strategy_used", std::string(gkpr_strategy_name(x.strategy)));
  r.add(prefix + "sigma_add_sq", x.sigma_add_sq).add(prefix + "sigma_tot_sq", x.sigma_tot_sq);
  r.add(prefix + "p_pauli", x.p_pauli).add(prefix + "qber", x.qber).add(prefix + "r", x.r);
  r.add(prefix + "K_bar", x.K_bar).add(prefix + "R", x.R).add(prefix + "S", x.S).add(prefix + "S_hz", x.S_hz);
}

int pauli_model(const Options& o) {
  if (o.pauli_model == "simplified") return GKPR_PAULI_SIMPLIFIED;
  if (o.pauli_model == "striped") return GKPR_PAULI_STRIPED;
  throw CliError(kExitValidation, "pauli-model: expected simplified or striped, got '" + o.pauli_model + "'");
}

double qber_limit(const Options& o) {
  return o.exact_threshold ? gkpr_exact_qber_threshold() : gkpr_working_qber_threshold();
}

gkpr_rate_options rate_options(const Options& o) {
  gkpr_rate_options r;
  gkpr_rate_options_default(&r);
  r.pauli_model = pauli_model(o);
  if (o.expectation != "closed" && o.expectation != "numeric") {
    throw CliError(kExitValidation, "expectation: expected closed or numeric, got '" + o.expectation + "'");
  }
  r.closed_form = o.expectation == "closed" ? 1 : 0;
  r.qber_limit = qber_limit(o);
  return r;
}

gkpr_simulation_options sim_options(const Options& o, unsigned workers) {
  gkpr_simulation_options s;
  gkpr_simulation_options_default(&s);
  if (o.trials < 1) throw CliError(kExitValidation, "trials: must be at least 1");
  if (o.inner < 1) throw CliError(kExitValidation, "inner: must be at least 1");
  s.trials = o.trials;
  s.inner_iterations = o.inner;
  s.seed = o.seed;
  s.workers = workers;
  s.pauli_model = pauli_model(o);
  s.qber_limit = qber_limit(o);
  return s;
}

unsigned workers_of(const Options& o) { return o.workers == 0 ? default_workers() : o.workers; }

std::map<std::string, std::string> model_defaults() {
  return {{"L", "100"},       {"n", "4"},     {"p_link", "0.7"},  {"delta_sq", "0.05"},
          {"t_coh", "10"},    {"gamma_sq", "0"}, {"strategy", "auto"}};
}

template <class F>
std::vector<Record> sweep(const Options& o, const std::vector<Point>& points, F&& fn) {
  return run_ordered<Record>(points.size(), workers_of(o), [&](std::size_t i) { return fn(points[i]); });
}

void emit(const Options& o, const std::vector<Record>& records, const std::string& text = "") {
  const Format f = parse_format(o.format);
  std::ostringstream os;
  if (f == Format::kText) {
    if (text.empty()) throw CliError(kExitValidation, "format: text is only available for table1 and table2");
    os << text;
  } else if (f == Format::kJson) {
    write_json(os, records);
  } else {
    write_csv(os, records);
  }
  if (o.out_path.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw CliError(kExitValidation, "out: cannot write '" + o.out_path + "'");
  out << os.str();
}

void require_not_text(const Options& o) {
  if (parse_format(o.format) == Format::kText) {
    throw CliError(kExitValidation, "format: text is only available for table1 and table2");
  }
}

int cmd_rate(const Options& o) {
  require_not_text(o);
  const auto points = expand(resolve_fields(o, model_defaults()));
  const auto ropt = rate_options(o);
  emit(o, sweep(o, points, [&](const Point& p) {
         auto c = make_config(p);
         gkpr_rate_result x;
         check(gkpr_analytic_rate(c.get(), &ropt, &x));
         double plob = 0;
         check(gkpr_plob_bound(p.L, &plob));
         Record r = inputs(p);
         add_rate(r, x);
         r.add("plob", plob);
         return r;
       }));
  return kExitOk;
}

int cmd_table1(const Options& o) {
  auto fields = resolve_fields(o, {{"p_link", "0.05,0.7,1"}, {"t_coh", "0.001,0.1,10"}});
  const auto pls = parse_grid(fields.at("p_link"), "p_link");
  const auto ts = parse_grid(fields.at("t_coh"), "t_coh");
  std::vector<Point> points;
  for (double t : ts)
    for (double pl : pls) {
      Point p;
      p.t_coh = t;
      p.p_link = pl;
      points.push_back(p);
    }
  const auto records = sweep(o, points, [&](const Point& p) {
    double km = 0;
    int found = 0;
    check(gkpr_cc_threshold_L0(p.p_link, p.t_coh, &km, &found));
    Record r;
    r.add("t_coh_s", p.t_coh).add("p_link", p.p_link);
    r.add("threshold_km", found ? km : std::nan("")).add("found", static_cast<long>(found));
    return r;
  });
  std::ostringstream text;
  text << "t_coh \\ p_link";
  for (double pl : pls) text << '\t' << format_double(pl);
  text << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    text << format_double(ts[i]) << " s";
    for (std::size_t j = 0; j < pls.size(); ++j) {
      const auto& rec = records[i * pls.size() + j];
      const double km = std::get<double>(rec.fields[2].second);
      text << '\t';
      if (std::isnan(km)) {
        text << "none";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f km", km);
        text << buf;
      }
    }
    text << '\n';
  }
  emit(o, records, text.str());
  return kExitOk;
}

int cmd_table2(const Options& o) {
  auto fields = resolve_fields(o, {{"delta_sq", "0.05,0.03,0.02,0.01"}, {"n", "2,4,8,16,32,64,128,256"}});
  const auto ds = parse_grid(fields.at("delta_sq"), "delta_sq");
  const auto ns = parse_int_grid(fields.at("n"), "n");
  const double limit = qber_limit(o);
  std::vector<Point> points;
  for (double d : ds)
    for (long n : ns) {
      Point p;
      p.delta_sq = d;
      p.n = n;
      points.push_back(p);
    }
  const auto records = sweep(o, points, [&](const Point& p) {
    double g = 0;
    check(gkpr_gamma_threshold(p.n, p.delta_sq, limit, &g));
    Record r;
    r.add("delta_sq", p.delta_sq).add("n", p.n).add("gamma_sq_threshold", g);
    return r;
  });
  std::ostringstream text;
  text << "delta_sq \\ n";
  for (long n : ns) text << '\t' << n;
  text << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    text << format_double(ds[i]);
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const double g = std::get<double>(records[i * ns.size() + j].fields[2].second);
      text << '\t';
      if (g < 1e-3) {
        text << "≤0.0010";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", g);
        text << buf;
      }
    }
    text << '\n';
  }
  emit(o, records, text.str());
  return kExitOk;
}

int cmd_compare(const Options& o) {
  require_not_text(o);
  auto defaults = model_defaults();
  defaults["L"] = "10:700:70";
  const auto points = expand(resolve_fields(o, defaults));
  const auto sopt = sim_options(o, 1);
  if (o.truncation < 1) throw CliError(kExitValidation, "truncation: must be at least 1");
  emit(o, sweep(o, points, [&](const Point& p) {
         auto c = make_config(p);
         gkpr_compare_row row;
         check(gkpr_compare_methods(c.get(), &p.L, 1, &sopt, o.truncation, &row));
         Record r = inputs(p);
         r.add("trials", sopt.trials).add("inner_iterations", sopt.inner_iterations);
         r.add("seed", std::to_string(sopt.seed));
         r.add("S_analytic", row.S_analytic).add("S_numeric", row.S_numeric);
         r.add("S_simulated", row.S_simulated).add("S_simulated_stderr", row.S_simulated_stderr);
         r.add("qber_analytic", row.qber_analytic).add("qber_numeric", row.qber_numeric);
         r.add("qber_simulated", row.qber_simulated).add("qber_simulated_stderr", row.qber_simulated_stderr);
         return r;
       }));
  return kExitOk;
}

int cmd_optimize(const Options& o) {
  require_not_text(o);
  auto fields = resolve_fields(o, model_defaults());
  fields["n"] = "1";  // ignored, n is the search variable
  const auto points = expand(fields);
  const auto ropt = rate_options(o);
  emit(o, sweep(o, points, [&](const Point& p) {
         auto c = make_config(p);
         long n_star = 0;
         int all_zero = 0;
         gkpr_rate_result best;
         check(gkpr_optimize_n(c.get(), o.n_min, o.n_max, &ropt, &n_star, &best, &all_zero));
         Record r = inputs(p, false);
         r.add("n_min", o.n_min).add("n_max", o.n_max).add("n_star", n_star).add("all_zero", static_cast<long>(all_zero));
         add_rate(r, best);
         return r;
       }));
  return kExitOk;
}

int cmd_baseline(const Options& o) {
  require_not_text(o);
  const auto points = expand(resolve_fields(o, model_defaults()));
  const auto mus = parse_grid(o.mu, "mu");
  int mapping = 0;
  if (o.mapping == "per-segment") {
    mapping = GKPR_MU_PER_SEGMENT;
  } else if (o.mapping == "per-swap") {
    mapping = GKPR_MU_PER_SWAP;
  } else {
    throw CliError(kExitValidation, "mapping: expected per-segment or per-swap, got '" + o.mapping + "'");
  }
  std::vector<std::pair<Point, double>> cells;
  for (const auto& p : points)
    for (double mu : mus) cells.emplace_back(p, mu);
  const auto ropt = rate_options(o);
  const auto records = run_ordered<Record>(cells.size(), workers_of(o), [&](std::size_t i) {
    const auto& [p, mu] = cells[i];
    auto c = make_config(p);
    gkpr_rate_result gkp, base;
    check(gkpr_analytic_rate(c.get(), &ropt, &gkp));
    check(gkpr_correctionless_rate(c.get(), mu, mapping, ropt.qber_limit, &base));
    Record r = inputs(p);
    r.add("mu", mu).add("mapping", o.mapping);
    r.add("gkp_qber", gkp.qber).add("gkp_S", gkp.S).add("gkp_S_hz", gkp.S_hz);
    r.add("baseline_qber", base.qber).add("baseline_S", base.S).add("baseline_S_hz", base.S_hz);
    return r;
  });
  emit(o, records);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  require_not_text(o);
  const auto points = expand(resolve_fields(o, model_defaults()));
  const auto sopt = sim_options(o, 1);
  emit(o, sweep(o, points, [&](const Point& p) {
         auto c = make_config(p);
         gkpr_simulation_stats s;
         check(gkpr_simulate(c.get(), &sopt, &s));
         double kbar = 0;
         gkpr_derived d;
         check(gkpr_derive(c.get(), &d));
         check(gkpr_avg_total_steps(p.n, d.p, &kbar));
         Record r = inputs(p);
         r.add("trials", s.trials).add("inner_iterations", s.inner_iterations).add("seed", std::to_string(s.seed));
         r.add("strategy_used", std::string(gkpr_strategy_name(s.strategy)));
         r.add("qber_mean", s.qber_mean).add("qber_stderr", s.qber_stderr);
         r.add("qber_exact_mean", s.qber_exact_mean).add("qber_exact_stderr", s.qber_exact_stderr);
         r.add("mean_completion_steps", s.mean_completion_steps).add("completion_stderr", s.completion_stderr);
         r.add("K_bar", kbar);
         r.add("swap_variance_mean", s.per_swap_variance.mean).add("swap_variance_var", s.per_swap_variance.variance);
         r.add("swap_wait_mean", s.per_swap_wait.mean).add("swap_wait_max", s.per_swap_wait.max);
         r.add("S", s.S).add("S_stderr", s.S_stderr).add("S_hz", s.S_hz);
         return r;
       }));
  return kExitOk;
}

int cmd_plob(const Options& o) {
  require_not_text(o);
  auto fields = resolve_fields(o, {{"L", "10:1000:100"}});
  const auto Ls = parse_grid(fields.at("L"), "L");
  std::vector<Point> points;
  for (double L : Ls) {
    Point p;
    p.L = L;
    points.push_back(p);
  }
  emit(o, sweep(o, points, [&](const Point& p) {
         double b = 0;
         check(gkpr_plob_bound(p.L, &b));
         Record r;
         r.add("L_km", p.L).add("plob", b);
         return r;
       }));
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool model_flags = true) {
  sub->add_option("--config", o.config_path, "JSON file with configuration fields");
  sub->add_option("--out", o.out_path, "output path (default stdout)");
  sub->add_option("--format", o.format, "csv, json (table1/table2 also: text)");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--workers", o.workers, "worker threads (0: all cores)");
  sub->add_option("--pauli-model", o.pauli_model, "simplified or striped");
  sub->add_flag("--exact-threshold", o.exact_threshold, "use the exact root of 1-2h(Q)=0 instead of 0.11");
  if (!model_flags) return;
  struct Flag {
    const char* name;
    const char* field;
    const char* help;
  };
  static const Flag flags[] = {
      {"--L", "L", "total distance in km (range)"},
      {"--n", "n", "segment count (range)"},
      {"--p-link", "p_link", "link efficiency (range)"},
      {"--delta-sq", "delta_sq", "GKP peak variance (range)"},
      {"--t-coh", "t_coh", "memory coherence time in s (range)"},
      {"--gamma-sq", "gamma_sq", "per-swap operation noise (range)"},
      {"--strategy", "strategy", "preamp, mean, mean-loss, cc or auto"},
      {"--n-atoms", "n_atoms", "ensemble size"},
      {"--theta-max", "theta_max", "small-angle bound in radians"},
  };
  for (const auto& f : flags) {
    const std::string field = f.field;
    sub->add_option_function<std::string>(
        f.name, [&o, field](const std::string& v) { o.flags[field] = v; }, f.help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-key rates of GKP-based quantum repeater chains"};
  app.require_subcommand(1);
  Options o;

  auto* rate = app.add_subcommand("rate", "analytic rate over a parameter grid");
  add_common(rate, o);
  rate->add_option("--expectation", o.expectation, "closed or numeric expected variance");

  auto* table1 = app.add_subcommand("table1", "CC versus preamplification segment-length thresholds");
  add_common(table1, o);

  auto* table2 = app.add_subcommand("table2", "operation-noise thresholds gamma^2");
  add_common(table2, o);

  auto* compare = app.add_subcommand("compare", "analytic, numeric and simulated rates");
  add_common(compare, o);
  compare->add_option("--trials", o.trials, "simulation trials");
  compare->add_option("--inner", o.inner, "parity samples per trial");
  compare->add_option("--truncation", o.truncation, "summands in the numeric average");

  auto* optimize = app.add_subcommand("optimize", "segment count maximising S_hz");
  add_common(optimize, o);
  optimize->add_option("--n-min", o.n_min, "smallest segment count");
  optimize->add_option("--n-max", o.n_max, "largest segment count");
  optimize->add_option("--expectation", o.expectation, "closed or numeric expected variance");

  auto* baseline = app.add_subcommand("baseline", "comparison with a scheme without error correction");
  add_common(baseline, o);
  baseline->add_option("--mu", o.mu, "depolarisation parameter (range)");
  baseline->add_option("--mapping", o.mapping, "per-segment (mu^n) or per-swap (mu^(n-1))");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo chain simulation");
  add_common(simulate, o);
  simulate->add_option("--trials", o.trials, "simulation trials");
  simulate->add_option("--inner", o.inner, "parity samples per trial");

  auto* plob = app.add_subcommand("plob", "repeaterless bound");
  add_common(plob, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (rate->parsed()) return cmd_rate(o);
    if (table1->parsed()) return cmd_table1(o);
    if (table2->parsed()) return cmd_table2(o);
    if (compare->parsed()) return cmd_compare(o);
    if (optimize->parsed()) return cmd_optimize(o);
    if (baseline->parsed()) return cmd_baseline(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (plob->parsed()) return cmd_plob(o);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}
