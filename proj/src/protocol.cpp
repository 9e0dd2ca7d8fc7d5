// SPDX-License-Identifier: Apache-2.0
#include "gkprep/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gkprep/error.hpp"

namespace gkpr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (x, z) bits relative to PsiPlus.
std::pair<int, int> bits(BellLabel b) {
  switch (b) {
    case BellLabel::kPsiPlus: return {0, 0};
    case BellLabel::kPsiMinus: return {0, 1};
    case BellLabel::kPhiPlus: return {1, 0};
    case BellLabel::kPhiMinus: return {1, 1};
  }
  return {0, 0};
}

BellLabel from_bits(int x, int z) {
  if (x == 0) return z == 0 ? BellLabel::kPsiPlus : BellLabel::kPsiMinus;
  return z == 0 ? BellLabel::kPhiPlus : BellLabel::kPhiMinus;
}

// k with v - k sqrt(pi) in (-sqrt(pi)/2, sqrt(pi)/2].
long nearest_multiple(double v) { return static_cast<long>(std::ceil(v / std::sqrt(kPi) - 0.5)); }

int parity(long k) { return static_cast<int>(((k % 2) + 2) % 2); }

enum Index { XA, PA, XB, PB, XC, PC, XD, PD };

Symplectic8 identity8() {
  Symplectic8 m{};
  for (int i = 0; i < 8; ++i) m[i * 8 + i] = 1.0;
  return m;
}

Symplectic8 multiply(const Symplectic8& a, const Symplectic8& b) {
  Symplectic8 c{};
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j) c[i * 8 + j] += a[i * 8 + k] * b[k * 8 + j];
  return c;
}

// x_target += x_source and p_source -= p_target.
Symplectic8 position_sum(int source_x, int target_x) {
  Symplectic8 m = identity8();
  m[target_x * 8 + source_x] += 1.0;
  m[(source_x + 1) * 8 + (target_x + 1)] -= 1.0;
  return m;
}

// x_a += p_b and x_b += p_a.
Symplectic8 momentum_coupling(int a_x, int b_x) {
  Symplectic8 m = identity8();
  m[a_x * 8 + (b_x + 1)] += 1.0;
  m[b_x * 8 + (a_x + 1)] += 1.0;
  return m;
}

Symplectic8 rotate(int mode_x, double angle) {
  Symplectic8 m = identity8();
  const double c = std::round(std::cos(angle));
  const double s = std::round(std::sin(angle));
  m[mode_x * 8 + mode_x] = c;
  m[mode_x * 8 + mode_x + 1] = s;
  m[(mode_x + 1) * 8 + mode_x] = -s;
  m[(mode_x + 1) * 8 + mode_x + 1] = c;
  return m;
}

double symplectic_error(const Symplectic8& s) {
  Symplectic8 omega{};
  for (int k = 0; k < 4; ++k) {
    omega[(2 * k) * 8 + 2 * k + 1] = 1.0;
    omega[(2 * k + 1) * 8 + 2 * k] = -1.0;
  }
  Symplectic8 st{};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) st[i * 8 + j] = s[j * 8 + i];
  const Symplectic8 check = multiply(multiply(st, omega), s);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) worst = std::max(worst, std::abs(check[i] - omega[i]));
  return worst;
}

double determinant(Symplectic8 m) {
  double det = 1.0;
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(m[r * 8 + col]) > std::abs(m[pivot * 8 + col])) pivot = r;
    if (m[pivot * 8 + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < 8; ++j) std::swap(m[pivot * 8 + j], m[col * 8 + j]);
      det = -det;
    }
    det *= m[col * 8 + col];
    for (int r = col + 1; r < 8; ++r) {
      const double f = m[r * 8 + col] / m[col * 8 + col];
      for (int j = col; j < 8; ++j) m[r * 8 + j] -= f * m[col * 8 + j];
    }
  }
  return det;
}

// Variance of sum_i c_i v_i over the C,D modes of a TMSV with squeezing r,
// vacuum variance 1/2.
double tmsv_variance(const std::array<double, 8>& c, double r) {
  const double ch = 0.5 * std::cosh(2.0 * r);
  const double sh = 0.5 * std::sinh(2.0 * r);
  return ch * (c[XC] * c[XC] + c[PC] * c[PC] + c[XD] * c[XD] + c[PD] * c[PD]) +
         2.0 * sh * (c[XC] * c[XD] - c[PC] * c[PD]);
}

}  // namespace

std::string_view to_string(DetectionOutcome o) {
  switch (o) {
    case DetectionOutcome::kPsiPlus: return "PsiPlus";
    case DetectionOutcome::kPsiMinus: return "PsiMinus";
    case DetectionOutcome::kBunched: return "Bunched";
    case DetectionOutcome::kForbidden: return "Forbidden";
    case DetectionOutcome::kInvalid: return "Invalid";
  }
  return "Invalid";
}

std::string_view to_string(BellLabel b) {
  switch (b) {
    case BellLabel::kPhiPlus: return "PhiPlus";
    case BellLabel::kPhiMinus: return "PhiMinus";
    case BellLabel::kPsiPlus: return "PsiPlus";
    case BellLabel::kPsiMinus: return "PsiMinus";
  }
  return "PsiPlus";
}

DetectionOutcome classify_detection(const DetectionPattern& pattern) {
  const auto& c = pattern.counts;
  for (int v : c)
    if (v < 0) return DetectionOutcome::kInvalid;
  if (c[0] + c[1] + c[2] + c[3] != 2) return DetectionOutcome::kInvalid;
  if (std::find(c.begin(), c.end(), 2) != c.end()) return DetectionOutcome::kBunched;
  const bool aH = c[0] == 1, aV = c[1] == 1, bH = c[2] == 1, bV = c[3] == 1;
  if ((aH && aV) || (bH && bV)) return DetectionOutcome::kPsiPlus;
  if ((aH && bV) || (aV && bH)) return DetectionOutcome::kPsiMinus;
  return DetectionOutcome::kForbidden;  // 1010, 0101
}

BellDecoding decode_bell_parities(double xbar_sum, double pbar_diff) {
  GKPR_REQUIRE(std::isfinite(xbar_sum) && std::isfinite(pbar_diff), "decode: inputs must be finite");
  const double root = std::sqrt(kPi);
  const long kx = nearest_multiple(xbar_sum);
  const long kp = nearest_multiple(pbar_diff);
  BellDecoding out;
  out.syndrome.x_shift = xbar_sum - static_cast<double>(kx) * root;
  out.syndrome.p_shift = pbar_diff - static_cast<double>(kp) * root;
  out.syndrome.x_parity = parity(kx);
  out.syndrome.p_parity = parity(kp);
  out.label = from_bits(1 - out.syndrome.x_parity, out.syndrome.p_parity);
  return out;
}

BellLabel compose(BellLabel a, BellLabel b) {
  const auto [ax, az] = bits(a);
  const auto [bx, bz] = bits(b);
  return from_bits(ax ^ bx, az ^ bz);
}

BellLabel compose_pauli_frame(const std::vector<BellLabel>& frames) {
  GKPR_REQUIRE(!frames.empty(), "frames: sequence must be non-empty");
  BellLabel acc = BellLabel::kPsiPlus;
  for (BellLabel f : frames) acc = compose(acc, f);
  return acc;
}

TmsvReport verify_tmsv_chain(double squeezing_r) {
  GKPR_REQUIRE(squeezing_r >= 0, "squeezing_r: must be non-negative");
  TmsvReport report;
  report.squeezing_r = squeezing_r;
  report.steps = {
      {"pC.XA", position_sum(XA, XC)},
      {"rotate D by pi/2", rotate(XD, kPi / 2)},
      {"pD.PB", momentum_coupling(XB, XD)},
      {"pC.XB", position_sum(XB, XC)},
      {"rotate D by pi", rotate(XD, kPi)},
      {"pD.PA", momentum_coupling(XA, XD)},
  };
  report.total = identity8();
  report.all_symplectic = true;
  for (auto& step : report.steps) {
    step.symplectic_error = symplectic_error(step.matrix);
    step.determinant = determinant(step.matrix);
    report.all_symplectic = report.all_symplectic && step.symplectic_error == 0.0 && step.determinant == 1.0;
    report.total = multiply(step.matrix, report.total);
  }
  for (int j = 0; j < 8; ++j) {
    report.measured_x[j] = report.total[XC * 8 + j];
    report.measured_p[j] = report.total[XD * 8 + j];
  }

  // Signal part must be x_A + x_B and p_A - p_B; the rest must be spanned by
  // x_C - x_D and p_C + p_D, which vanish for an ideal TMSV.
  const auto& mx = report.measured_x;
  const auto& mp = report.measured_p;
  const bool signal = mx[XA] == 1 && mx[XB] == 1 && mx[PA] == 0 && mx[PB] == 0 && mp[PA] == 1 &&
                      mp[PB] == -1 && mp[XA] == 0 && mp[XB] == 0;
  auto in_null_space = [](const std::array<double, 8>& c) {
    return c[XC] == -c[XD] && c[PC] == c[PD];
  };
  report.exact_at_infinite_squeezing = signal && in_null_space(mx) && in_null_space(mp);
  if (std::isinf(squeezing_r)) {
    report.residual_variance_x = in_null_space(mx) ? 0.0 : std::numeric_limits<double>::infinity();
    report.residual_variance_p = in_null_space(mp) ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    report.residual_variance_x = tmsv_variance(mx, squeezing_r);
    report.residual_variance_p = tmsv_variance(mp, squeezing_r);
  }
  return report;
}

long distribution_attempt(Rng& rng, double p) {
  GKPR_REQUIRE(p > 0 && p <= 1, "p: success probability must lie in (0, 1]");
  return rng.geometric(p);
}

}  // namespace gkpr
