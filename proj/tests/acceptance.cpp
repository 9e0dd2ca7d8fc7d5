// SPDX-License-Identifier: Apache-2.0
// Acceptance checks: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "gkprep/amplify.hpp"
#include "gkprep/gkpcode.hpp"
#include "gkprep/montecarlo.hpp"
#include "gkprep/protocol.hpp"
#include "gkprep/rates.hpp"
#include "gkprep/stats.hpp"
#include "oracles.hpp"

using namespace gkpr;

namespace {

const double kRootPi = std::sqrt(3.14159265358979323846);

// Collects sub-check results of one criterion.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      ok_ = false;
      std::printf("  fail: %s\n", what.c_str());
    }
  }
  void note(const std::string& what) { std::printf("  %s\n", what.c_str()); }
  bool ok() const { return ok_; }

 private:
  bool ok_ = true;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RepeaterConfig fig4(double L) {
  RepeaterConfig c;
  c.length_km = L;
  c.segments = 4;
  c.p_link = 0.7;
  c.delta_sq = 0.05;
  c.t_coh_s = 10.0;
  c.strategy = AmplificationStrategy::kPerStepPreamp;
  return c;
}

bool criterion_1(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const double p_links[] = {0.05, 0.7, 1.0};
  const double t_cohs[] = {1e-3, 0.1, 10.0};
  const double want[3][3] = {{0.5, 14, 50}, {16, 56, 100}, {20, 63, 108}};  // [p_link][t_coh]
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto got = cc_threshold_L0(p_links[i], t_cohs[j]);
      const double tol = want[i][j] < 1 ? 0.5 : 1.0;
      const double g = got ? *got : NAN;
      v.note(fmt("p_link=%g t_coh=%g: %.3f km (table %g)", p_links[i], t_cohs[j], g, want[i][j]));
      v.check(got && std::abs(g - want[i][j]) <= tol, fmt("cell p_link=%g t_coh=%g off by more than %g km", p_links[i], t_cohs[j], tol));
    }
  }
  const double dt = seconds_since(t0);
  v.note(fmt("runtime %.3f s", dt));
  v.check(dt < 10, "runtime at least 10 s");
  return v.ok();
}

bool criterion_2(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const long ns[] = {2, 4, 8, 16, 32, 64, 128, 256};
  const double deltas[] = {0.05, 0.03, 0.02, 0.01};
  // Negative entries mark the cells printed as an upper bound of 0.0010.
  const double table[4][8] = {{0.2075, 0.0858, 0.0390, 0.0125, -1, -1, -1, -1},
                              {0.2475, 0.1258, 0.0790, 0.0525, 0.0348, 0.0220, 0.0123, 0.0046},
                              {0.2675, 0.1458, 0.0990, 0.0725, 0.0548, 0.0420, 0.0323, 0.0246},
                              {0.2875, 0.1658, 0.1190, 0.0925, 0.0748, 0.0620, 0.0523, 0.0446}};
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double g = gamma_threshold(ns[j], deltas[i]);
      if (table[i][j] < 0) {
        v.check(g <= 0.0015, fmt("delta^2=%g n=%g: %.5f exceeds 0.0015", deltas[i], static_cast<double>(ns[j]), g));
      } else {
        worst = std::max(worst, std::abs(g - table[i][j]));
        v.check(std::abs(g - table[i][j]) <= 0.002,
                fmt("delta^2=%g n=%g: %.5f vs %.4f", deltas[i], static_cast<double>(ns[j]), g, table[i][j]));
      }
    }
  }
  const double dt = seconds_since(t0);
  v.note(fmt("largest deviation %.5f, runtime %.3f s", worst, dt));
  v.check(dt < 5, "runtime at least 5 s");
  return v.ok();
}

bool criterion_3(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> Ls;
  for (int L = 25; L <= 650; L += 25) Ls.push_back(L);
  SimulationOptions o;
  o.trials = 5000;
  o.inner_iterations = 1000;
  o.seed = 42;
  o.workers = 0;
  const auto rows = compare_methods(fig4(0), Ls, o);
  double low_sim = 0, low_an = 0;
  for (const auto& r : rows) {
    const bool both = r.S_analytic > 0 && r.S_numeric > 0;
    const double rel = both ? (r.S_numeric - r.S_analytic) / r.S_analytic : 0;
    const double z_an = r.S_simulated_stderr > 0 ? (r.S_simulated - r.S_analytic) / r.S_simulated_stderr : 0;
    const double z_num = r.S_simulated_stderr > 0 ? (r.S_simulated - r.S_numeric) / r.S_simulated_stderr : 0;
    v.note(fmt("L=%4.0f analytic=%.4e numeric-vs-analytic=%+.4f", r.length_km, r.S_analytic, rel) +
           fmt(" z(sim-analytic)=%+.2f z(sim-numeric)=%+.2f", z_an, z_num));
    if (both) v.check(std::abs(rel) <= 0.05, fmt("L=%g: analytic and numeric differ by %.2f%%", r.length_km, 100 * rel));
    if (r.S_simulated_stderr > 0 || r.S_analytic > 0) {
      v.check(std::abs(r.S_simulated - r.S_analytic) <= 3 * r.S_simulated_stderr,
              fmt("L=%g: simulation %.2f standard errors from analytic", r.length_km, z_an));
    }
    if (r.length_km <= 150) {
      low_sim += r.S_simulated;
      low_an += r.S_analytic;
    }
  }
  // Simulation slightly above the analytic rate at the short end, pooled.
  v.note(fmt("pooled simulated/analytic ratio for L <= 150 km: %.6f", low_sim / low_an));
  v.check(low_sim > low_an, "simulation not above analytic at low L");
  const double dt = seconds_since(t0);
  v.note(fmt("runtime %.1f s", dt));
  v.check(dt < 300, "runtime at least 5 min");
  return v.ok();
}

bool criterion_4(Verdict& v) {
  double worst = 0;
  for (long n = 2; n <= 512; ++n) worst = std::max(worst, std::abs(qber(n, pauli_threshold(n)) - 0.11));
  v.note(fmt("largest |qber - 0.11| over n = 2..512: %.3e", worst));
  v.check(worst <= 1e-9, "qber at the threshold off by more than 1e-9");
  for (double s : {1e4, 1e6, static_cast<double>(INFINITY)}) {
    const double pp = pauli_error_prob(s, PauliModel::kStriped);
    v.note(fmt("striped p_Pauli at sigma^2=%g: %.12f", s, pp));
    v.check(std::abs(pp - 0.5) <= 1e-6, fmt("striped limit at %g not 1/2", s));
  }
  return v.ok();
}

bool criterion_5(Verdict& v) {
  double worst_pmf = 0, worst_conv = 0;
  for (int i = 1; i <= 19; ++i) {
    const double p = 0.05 * i;
    for (long k = 0; k <= 200; ++k) worst_pmf = std::max(worst_pmf, std::abs(geom_abs_diff_pmf(k, p) - oracle::brute_abs_diff_pmf(k, p)));
    for (long m = 1; m <= 4; ++m) {
      const auto conv = oracle::convolved_sum_pmf(m, p, 200);
      for (long j = 0; j <= 200; ++j) {
        worst_conv = std::max(worst_conv, std::abs(sum_waiting_pmf(j, m, p) - conv[static_cast<std::size_t>(j)]));
      }
    }
  }
  v.note(fmt("largest pmf deviation %.3e, convolution deviation %.3e", worst_pmf, worst_conv));
  v.check(worst_pmf <= 1e-10, "waiting-time pmf off by more than 1e-10");
  v.check(worst_conv <= 1e-10, "total waiting pmf off by more than 1e-10");
  double worst_mc = 0;
  std::uint64_t seed = 500;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (long n = 1; n <= 8; ++n) {
      const auto mc = oracle::mc_max_geometric(n, p, 400'000, ++seed);
      const double rel = std::abs(avg_total_steps(n, p) - mc.mean) / mc.mean;
      worst_mc = std::max(worst_mc, rel);
      v.check(rel <= 0.005, fmt("avg_total_steps(%g, %g) off by %.3f%%", static_cast<double>(n), p, 100 * rel));
    }
  }
  v.note(fmt("largest relative deviation from Monte Carlo: %.4f%%", 100 * worst_mc));
  return v.ok();
}

bool criterion_6(Verdict& v) {
  double worst = 0;
  std::uint64_t seed = 900;
  for (long n : {2L, 4L, 8L}) {
    for (double p : {0.1, 0.3, 0.7}) {
      for (double a : {1e-4, 1e-3, 1e-2}) {
        const auto mc = oracle::mc_chain_dephasing(n, p, a, 200'000, ++seed);
        const double rel = std::abs(exp_dephasing_mean(n, p, a) - mc.mean) / mc.mean;
        worst = std::max(worst, rel);
        v.check(rel <= 0.01, fmt("n=%g p=%g alpha=%g: %.3f%% off", static_cast<double>(n), p, a, 100 * rel));
      }
    }
  }
  v.note(fmt("largest relative deviation %.4f%%", 100 * worst));
  return v.ok();
}

bool criterion_7(Verdict& v) {
  for (double L = 5; L <= 40; L += 5) {
    const double s = analytic_rate(fig4(L)).S;
    v.check(s < plob_bound(L), fmt("L=%g: %.4e not below the bound %.4e", L, s, plob_bound(L)));
  }
  double last = 0;
  for (double L = 60;; L += 10) {
    const double s = analytic_rate(fig4(L)).S;
    if (s == 0) break;
    last = L;
    v.check(s > plob_bound(L), fmt("L=%g: %.4e not above the bound %.4e", L, s, plob_bound(L)));
  }
  v.note(fmt("checked below the bound on 5..40 km, above it on 60..%g km (rate zero beyond)", last));
  v.check(last >= 100, "rate vanishes before 100 km");
  return v.ok();
}

bool criterion_8(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  RepeaterConfig c;
  c.length_km = 20000;
  c.segments = 200;
  c.p_link = 0.7;
  c.delta_sq = 0.02;
  c.t_coh_s = 10;
  c.strategy = AmplificationStrategy::kAuto;
  const auto r = analytic_rate(c);
  const double dt = seconds_since(t0);
  v.note(fmt("S = %.4f Hz (qber %.4e, K_bar %.2f), runtime %.4f s", r.S_hz, r.qber, r.K_bar, dt));
  v.check(r.S_hz >= 5 && r.S_hz <= 20, "S_hz outside [5, 20] Hz");
  v.check(dt < 1, "runtime at least 1 s");
  return v.ok();
}

bool criterion_9(Verdict& v) {
  long prev = 0;
  for (double d : {0.05, 0.03, 0.02, 0.01}) {
    RepeaterConfig c;
    c.length_km = 100;
    c.p_link = 0.7;
    c.t_coh_s = 10;
    c.delta_sq = d;
    c.strategy = AmplificationStrategy::kAuto;
    const auto o = optimize_n(c, 1, 1'000'000'000);
    v.note(fmt("L=100 delta^2=%g: n*=%g S=%.4e Hz", d, static_cast<double>(o.n_star), o.best.S_hz));
    v.check(!o.all_zero && o.n_star < 1'000'000'000, fmt("no interior optimum at delta^2=%g", d));
    v.check(o.n_star >= prev, fmt("n* decreased at delta^2=%g", d));
    prev = o.n_star;

    c.length_km = 20;
    const auto s = optimize_n(c, 1, 1'000'000'000);
    v.note(fmt("L=20 delta^2=%g: n*=%g S=%.4e Hz", d, static_cast<double>(s.n_star), s.best.S_hz));
    v.check(s.n_star == 2, fmt("n* at 20 km is not 2 for delta^2=%g", d));
  }
  return v.ok();
}

bool criterion_10(Verdict& v) {
  std::map<DetectionOutcome, int> census;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2 - a; ++b)
      for (int c = 0; c <= 2 - a - b; ++c) {
        DetectionPattern p;
        p.counts = {a, b, c, 2 - a - b - c};
        ++census[classify_detection(p)];
      }
  const int usable = census[DetectionOutcome::kPsiPlus] + census[DetectionOutcome::kPsiMinus];
  v.note(fmt("usable %g, bunched %g, forbidden %g", usable, census[DetectionOutcome::kBunched],
             census[DetectionOutcome::kForbidden]));
  v.check(usable == 4 && census[DetectionOutcome::kBunched] == 4 && census[DetectionOutcome::kForbidden] == 2 &&
              census[DetectionOutcome::kInvalid] == 0,
          "detector pattern census");

  long bad = 0;
  for (long kx = -4; kx <= 4; ++kx) {
    for (long kp = -4; kp <= 4; ++kp) {
      const bool psi = (kx % 2 + 2) % 2 == 1, minus = (kp % 2 + 2) % 2 == 1;
      const BellLabel want = psi ? (minus ? BellLabel::kPsiMinus : BellLabel::kPsiPlus)
                                 : (minus ? BellLabel::kPhiMinus : BellLabel::kPhiPlus);
      for (int i = -9; i <= 9; ++i) {
        for (int j = -9; j <= 9; ++j) {
          const double rx = 0.05 * i * kRootPi, rp = 0.05 * j * kRootPi;
          const auto d = decode_bell_parities(kx * kRootPi + rx, kp * kRootPi + rp);
          if (d.label != want || std::abs(d.syndrome.x_shift - rx) > 1e-12 || std::abs(d.syndrome.p_shift - rp) > 1e-12) ++bad;
        }
      }
    }
  }
  v.note(fmt("decoding mismatches inside the stripes: %g of %g", static_cast<double>(bad), 81.0 * 361));
  v.check(bad == 0, "decoding inside the stripe");

  const auto t = verify_tmsv_chain();
  v.check(t.all_symplectic, "a step is not symplectic");
  v.check(t.exact_at_infinite_squeezing, "measured combinations not exact at infinite squeezing");
  v.check(t.measured_x[0] == 1 && t.measured_x[2] == 1 && t.measured_p[1] == 1 && t.measured_p[3] == -1,
          "measured rows are not x_A + x_B and p_A - p_B");
  v.check(t.residual_variance_x == 0 && t.residual_variance_p == 0, "residual variance at infinite squeezing");
  return v.ok();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool criterion_11(Verdict& v) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("gkprep_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "simulate --L 50:400:4 --n 8 --trials 400 --inner 100 --seed 7"},
      {"compare", "compare --L 100,300,500 --n 4 --trials 300 --inner 100 --truncation 5000 --seed 11 --format json"},
      {"simulate_striped", "simulate --L 200 --n 2:16:3 --trials 300 --inner 50 --seed 3 --pauli-model striped"},
  };
  for (const auto& [name, args] : commands) {
    std::string reference;
    for (unsigned w : {1u, 2u, 5u, 16u}) {
      const fs::path out = dir / (name + "_w" + std::to_string(w));
      const std::string cmd = std::string("\"") + GKPREP_CLI_PATH + "\" " + args + " --workers " + std::to_string(w) +
                              " --out \"" + out.string() + "\"";
      const int rc = std::system(cmd.c_str());
      v.check(rc == 0, name + ": command failed with workers " + std::to_string(w));
      const std::string body = slurp(out);
      v.check(!body.empty(), name + ": empty output");
      if (w == 1) {
        reference = body;
      } else {
        v.check(body == reference, name + ": output differs with workers " + std::to_string(w));
      }
    }
    v.note(name + ": " + std::to_string(reference.size()) + " bytes, identical across 1, 2, 5, 16 workers");
  }
  fs::remove_all(dir);
  return v.ok();
}

// Correctionless comparison at short coherence time: GKP never loses and its
// advantage at 25 km grows with the number of stations.
bool criterion_baseline(Verdict& v) {
  double prev_ratio = 0;
  for (long n : {2L, 4L, 8L, 16L, 32L}) {
    for (double L = 5; L <= 400; L += 5) {
      RepeaterConfig c;
      c.length_km = L;
      c.segments = n;
      c.p_link = 1.0;
      c.delta_sq = 0.02;
      c.t_coh_s = 1e-3;
      c.strategy = AmplificationStrategy::kAuto;
      const double g = analytic_rate(c).S_hz;
      const double b = correctionless_rate(c, 1.0).S_hz;
      v.check(g >= b, fmt("n=%g L=%g: GKP %.4e below baseline %.4e", static_cast<double>(n), L, g, b));
      if (L == 25) {
        const double ratio = b > 0 ? g / b : INFINITY;
        v.note(fmt("n=%g L=25 km: GKP %.4e Hz, baseline %.4e Hz, ratio %g", static_cast<double>(n), g, b, ratio));
        v.check(g > 0, "GKP rate vanishes at 25 km");
        v.check(ratio > prev_ratio || (std::isinf(ratio) && std::isinf(prev_ratio)),
                fmt("advantage does not grow at n=%g", static_cast<double>(n)));
        prev_ratio = ratio;
      }
    }
  }
  return v.ok();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string which = "all";
  app.add_option("--criterion", which, "1..11, baseline or all");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<bool(Verdict&)>>> all = {
      {"1", criterion_1}, {"2", criterion_2}, {"3", criterion_3},   {"4", criterion_4},
      {"5", criterion_5}, {"6", criterion_6}, {"7", criterion_7},   {"8", criterion_8},
      {"9", criterion_9}, {"10", criterion_10}, {"11", criterion_11}, {"baseline", criterion_baseline},
  };
  bool any = false, all_ok = true;
  for (const auto& [name, fn] : all) {
    if (which != "all" && which != name) continue;
    any = true;
    Verdict v;
    bool ok = false;
    try {
      ok = fn(v);
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
    }
    std::printf("%s criterion %s\n", ok ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return all_ok ? 0 : 1;
}
