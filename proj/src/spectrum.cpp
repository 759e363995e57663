#include "em1d/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace em1d {

namespace {

constexpr Complex kA{1.0, 1.0};  // 1 + i

Complex family_a(Branch sign) { return sign == Branch::plus ? kA : std::conj(kA); }

Branch family_of(int j) { return j <= 3 ? Branch::plus : Branch::minus; }

void require_label(int j) { require(j >= 1 && j <= 6, "eigenvalue label must be in 1..6, got " + std::to_string(j)); }

Complex cubic_eval(Complex b, Complex c, Complex d, Complex z) { return ((z + b) * z + c) * z + d; }
Complex cubic_deriv(Complex b, Complex c, Complex z) { return (3.0 * z + 2.0 * b) * z + c; }

// Newton on z^3 + b z^2 + c z + d starting from z.
Complex newton_polish(Complex b, Complex c, Complex d, Complex z, int max_iter = 8) {
  for (int it = 0; it < max_iter; ++it) {
    const Complex fp = cubic_deriv(b, c, z);
    if (fp == 0.0) break;
    const Complex step = cubic_eval(b, c, d, z) / fp;
    const Complex next = z - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    z = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z)) break;
  }
  return z;
}

Complex principal_cbrt(Complex z) {
  if (z == 0.0) return 0.0;
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::low: return "low";
    case Regime::mid: return "mid";
    case Regime::high: return "high";
  }
  return "?";
}

Mat2c symbol_f(double k, double gamma) {
  Mat2c a;
  a << 1.0, 1.0 + gamma * k * k, -1.0, 0.0;
  return a;
}

Mat6c symbol_e(double k) {
  const Mat2c o = rotation_generator();
  const Mat2c id = Mat2c::Identity();
  Mat6c a = Mat6c::Zero();
  a.block<2, 2>(0, 0) = id - o;
  a.block<2, 2>(0, 2) = id;
  a.block<2, 2>(2, 0) = -id;
  a.block<2, 2>(2, 4) = -I * k * o;
  a.block<2, 2>(4, 2) = I * k * o;
  return a;
}

// ---------------------------------------------------------------------------

FSymbol eigen_f(double k, double gamma) {
  require(gamma > 0.0, "gamma must be positive");
  const double s = 0.5 * std::sqrt(3.0 + 4.0 * gamma * k * k);
  return FSymbol{k, gamma, Complex(-0.5, s), Complex(-0.5, -s)};
}

double f_regime_boundary(double gamma) {
  require(gamma > 0.0, "gamma must be positive");
  return std::sqrt(3.0 * gamma) / (2.0 * gamma);
}

std::array<Complex, 2> expansion_f(double k, double gamma, Regime regime) {
  const double eta = f_regime_boundary(gamma);
  const double ak = std::abs(k);
  double im = 0.0;
  if (regime == Regime::low) {
    require(ak <= eta, "expansion_f: low regime needs |k| <= " + std::to_string(eta));
    im = 0.5 * std::sqrt(3.0) * (1.0 + (2.0 * gamma / 3.0) * k * k);
  } else if (regime == Regime::high) {
    require(ak > eta, "expansion_f: high regime needs |k| > " + std::to_string(eta));
    im = std::sqrt(gamma) * ak * (1.0 + 3.0 / (8.0 * gamma * k * k));
  } else {
    throw InvalidArgument("expansion_f: regime must be low or high");
  }
  return {Complex(-0.5, im), Complex(-0.5, -im)};
}

double expansion_residual_f(double k, double gamma, Regime regime) {
  (void)expansion_f(k, gamma, regime);  // precondition check
  if (regime == Regime::low) {
    const double x = 4.0 * gamma * k * k;
    const double r3 = std::sqrt(3.0);
    const double den = std::sqrt(3.0 + x) + r3;
    return x * x / (4.0 * r3 * den * den);
  }
  const double y = 3.0 / (4.0 * gamma * k * k);
  const double den = std::sqrt(1.0 + y) + 1.0;
  return std::sqrt(gamma) * std::abs(k) * y * y / (2.0 * den * den);
}

// ---------------------------------------------------------------------------

Complex char_poly_e(Branch sign, double k, Complex lam) {
  const Complex a = family_a(sign);
  const double k2 = k * k;
  return ((lam + a) * lam + (k2 + 1.0)) * lam + a * k2;
}

std::array<Complex, 3> solve_monic_cubic(Complex b, Complex c, Complex d) {
  const Complex shift = b / 3.0;
  const Complex p = c - b * shift;
  const Complex q = 2.0 * shift * shift * shift - c * shift + d;
  const Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  const Complex c1 = -q / 2.0 + disc;
  const Complex c2 = -q / 2.0 - disc;
  const Complex u = principal_cbrt(std::abs(c1) >= std::abs(c2) ? c1 : c2);

  const Complex omega = std::polar(1.0, 2.0 * kPi / 3.0);
  std::array<Complex, 3> roots{};
  Complex w = 1.0;
  for (auto& r : roots) {
    const Complex uw = u * w;
    const Complex y = uw == 0.0 ? Complex(0.0) : uw - p / (3.0 * uw);
    r = newton_polish(b, c, d, y - shift);
    w *= omega;
  }

  // Vieta gate, each identity relative to the magnitude of its terms.
  const double tol = 1e-10;
  const Complex e1 = roots[0] + roots[1] + roots[2];
  const Complex e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
  const Complex e3 = roots[0] * roots[1] * roots[2];
  const double s1 = std::abs(roots[0]) + std::abs(roots[1]) + std::abs(roots[2]);
  const double s2 = std::abs(roots[0] * roots[1]) + std::abs(roots[0] * roots[2]) + std::abs(roots[1] * roots[2]);
  const double s3 = std::abs(e3);
  const bool ok = std::abs(e1 + b) <= tol * std::max(1.0, s1) && std::abs(e2 - c) <= tol * std::max(1.0, s2) &&
                  std::abs(e3 + d) <= tol * std::max(1.0, s3);
  if (!ok) throw NumericalError("cubic solve: polished roots fail the Vieta gate");
  return roots;
}

std::array<Complex, 3> roots_e(Branch sign, double k) {
  const Complex a = family_a(sign);
  const double k2 = k * k;
  auto roots = solve_monic_cubic(a, Complex(k2 + 1.0), a * k2);
  const double gate = 1e-10 * std::max(1.0, std::abs(k) * k2);
  for (const auto& r : roots) {
    if (!(std::abs(char_poly_e(sign, k, r)) < gate))
      throw NumericalError("roots_e: polished root residual above gate at k=" + std::to_string(k));
  }
  return roots;
}

Regime RegimeThresholds::classify(double k) const {
  const double ak = std::abs(k);
  if (ak < eps) return Regime::low;
  if (ak > R) return Regime::high;
  return Regime::mid;
}

double spectral_gap_e(double k) {
  require(k != 0.0, "spectral_gap_e: k = 0 is excluded (lambda_1 = 0 there)");
  double gap = std::numeric_limits<double>::infinity();
  for (Branch s : {Branch::plus, Branch::minus})
    for (const auto& r : roots_e(s, k)) gap = std::min(gap, -r.real());
  return gap;
}

RegimeThresholds measure_thresholds(double eps, double R, int points) {
  require(eps > 0.0 && eps < R, "thresholds need 0 < eps < R");
  require(points >= 2, "threshold grid needs at least 2 points");
  RegimeThresholds t{eps, R, 0.0};
  double c = std::numeric_limits<double>::infinity();
  const double le = std::log(eps);
  const double lr = std::log(R);
  for (int i = 0; i < points; ++i) {
    const double k = std::exp(le + (lr - le) * i / (points - 1));
    c = std::min(c, spectral_gap_e(k));
  }
  t.c = c;
  return t;
}

Complex other_root_sum(Branch sign, double k, Complex lam) {
  // mu = lam + a solves the cubic shifted to -a:
  //   mu^3 - 2a mu^2 + (k^2 + 1 + a^2) mu - a = 0
  const Complex a = family_a(sign);
  const Complex mu = newton_polish(-2.0 * a, k * k + 1.0 + a * a, -a, lam + a, 3);
  return -mu;
}

Complex anchor_z2() { return -kA / 2.0 + std::sqrt(Complex(-4.0, 2.0)) / 2.0; }
Complex anchor_z3() { return -kA / 2.0 - std::sqrt(Complex(-4.0, 2.0)) / 2.0; }

// ---------------------------------------------------------------------------

SpectrumTracker::SpectrumTracker() : cur_{Complex(0.0), anchor_z2(), anchor_z3()} {}

bool SpectrumTracker::try_step(double k_next) {
  const auto fresh = roots_e(Branch::plus, k_next);
  std::array<Complex, 3> pred = cur_;
  if (has_prev_ && k_ > prev_k_) {
    const double f = (k_next - k_) / (k_ - prev_k_);
    for (int i = 0; i < 3; ++i) pred[i] = cur_[i] + (cur_[i] - prev_[i]) * f;
  }

  std::array<int, 3> pick{};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> dist{};
    for (int j = 0; j < 3; ++j) dist[j] = std::abs(fresh[j] - pred[i]);
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return dist[x] < dist[y]; });
    const double d1 = dist[order[0]];
    const double d2 = dist[order[1]];
    if (d2 - d1 <= 1e-12 * std::max(1.0, std::abs(pred[i]))) {
      if (k_next - k_ <= 1e-12 * std::max(1.0, k_))
        throw NumericalError("spectrum labeling: branch distance tie at k=" + std::to_string(k_next));
      return false;
    }
    if (d1 > 0.25 * d2) return false;
    pick[i] = order[0];
  }
  if (pick[0] == pick[1] || pick[0] == pick[2] || pick[1] == pick[2]) return false;

  prev_ = cur_;
  prev_k_ = k_;
  has_prev_ = true;
  for (int i = 0; i < 3; ++i) cur_[i] = fresh[pick[i]];
  k_ = k_next;
  return true;
}

void SpectrumTracker::advance_to(double k_abs) {
  require(k_abs >= k_, "SpectrumTracker only advances in increasing |k|");
  while (k_ < k_abs) {
    double next = k_ == 0.0 ? std::min(k_abs, 1e-3) : std::min(k_abs, k_ * 1.1);
    int halvings = 0;
    while (!try_step(next)) {
      next = k_ + 0.5 * (next - k_);
      if (++halvings > 60) throw NumericalError("spectrum labeling: continuation step underflow");
    }
  }
}

namespace {

ESymbol assemble(double k, const std::array<Complex, 3>& plus, const RegimeThresholds& thr) {
  ESymbol s;
  s.k = k;
  s.regime = thr.classify(k);
  for (int i = 0; i < 3; ++i) s.lambda[i] = plus[i];

  auto minus = roots_e(Branch::minus, std::abs(k));
  std::array<bool, 3> used{};
  for (int i = 0; i < 3; ++i) {
    const Complex target = std::conj(plus[i]);
    int best = -1;
    for (int j = 0; j < 3; ++j) {
      if (used[j]) continue;
      if (best < 0 || std::abs(minus[j] - target) < std::abs(minus[best] - target)) best = j;
    }
    used[best] = true;
    s.lambda[3 + i] = minus[best];
  }

  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) d = std::min(d, std::abs(s.lambda[i] - s.lambda[j]));
  s.cross_family_distance = d;
  s.cross_family_collision = d < 1e-10;
  return s;
}

}  // namespace

ESymbol label_spectrum_e(double k, const RegimeThresholds& thresholds) {
  SpectrumTracker tr;
  tr.advance_to(std::abs(k));
  return assemble(k, tr.roots(), thresholds);
}

std::vector<ESymbol> label_spectrum_e(std::span<const double> ks, const RegimeThresholds& thresholds) {
  std::vector<std::size_t> order(ks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(ks[a]) < std::abs(ks[b]); });
  std::vector<ESymbol> out(ks.size());
  SpectrumTracker tr;
  for (std::size_t idx : order) {
    tr.advance_to(std::abs(ks[idx]));
    out[idx] = assemble(ks[idx], tr.roots(), thresholds);
  }
  return out;
}

// ---------------------------------------------------------------------------

ExpansionTerms expansion_e_terms(double k, int j, Regime regime, const RegimeThresholds& thr) {
  require_label(j);
  const double ak = std::abs(k);
  const int m = (j - 1) % 3;
  ExpansionTerms t;
  if (regime == Regime::low) {
    require(ak <= thr.eps, "expansion_e: low regime needs |k| <= eps");
    const double k2 = k * k;
    const Complex shape = std::sqrt(Complex(-1.0, 2.0)) / std::sqrt(5.0);
    switch (m) {
      case 0: t = {0.0, -kA * k2}; break;
      case 1: t = {anchor_z2(), (kA / 2.0 + shape) * k2}; break;
      default: t = {anchor_z3(), (kA / 2.0 - shape) * k2}; break;
    }
  } else if (regime == Regime::high) {
    require(ak >= thr.R, "expansion_e: high regime needs |k| >= R");
    const double inv = 1.0 / ak;
    const double inv2 = inv * inv;
    switch (m) {
      case 0: t = {-kA, kA * inv2}; break;
      case 1: t = {I * ak, 0.5 * I * inv - 0.5 * kA * inv2}; break;
      default: t = {-I * ak, -0.5 * I * inv - 0.5 * kA * inv2}; break;
    }
  } else {
    throw InvalidArgument("expansion_e: regime must be low or high");
  }
  if (family_of(j) == Branch::minus) t = {std::conj(t.anchor), std::conj(t.correction)};
  return t;
}

Complex expansion_e(double k, int j, Regime regime, const RegimeThresholds& thr) {
  return expansion_e_terms(k, j, regime, thr).value();
}

AnchoredRoot anchored_root_e(double k, int j, Regime regime, const RegimeThresholds& thr) {
  const ExpansionTerms terms = expansion_e_terms(k, j, regime, thr);
  const int m = (j - 1) % 3;
  const double ak = std::abs(k);
  const double k2 = k * k;

  // Anchor and coefficients of the g+ cubic shifted to the anchor, for the
  // g+ member of the pair; the g- case is its conjugate.
  Complex anchor = family_of(j) == Branch::minus ? std::conj(terms.anchor) : terms.anchor;
  Complex c2, c1, c0;
  if (regime == Regime::high) {
    switch (m) {
      case 0:
        c2 = -2.0 * kA;
        c1 = Complex(k2 + 1.0, 2.0);
        c0 = -kA;
        break;
      case 1:
        c2 = Complex(1.0, 3.0 * ak + 1.0);
        c1 = Complex(1.0 - 2.0 * k2 - 2.0 * ak, 2.0 * ak);
        c0 = I * ak;
        break;
      default:
        c2 = Complex(1.0, 1.0 - 3.0 * ak);
        c1 = Complex(1.0 - 2.0 * k2 + 2.0 * ak, -2.0 * ak);
        c0 = -I * ak;
        break;
    }
  } else {
    const Complex z = anchor;
    c2 = 3.0 * z + kA;
    c1 = (3.0 * z + 2.0 * kA) * z + (k2 + 1.0);
    c0 = char_poly_e(Branch::plus, k, z);
  }

  const ESymbol sym = label_spectrum_e(k, thr);
  const Complex root_plus = sym.lambda[static_cast<std::size_t>(m)];
  const Complex mu = newton_polish(c2, c1, c0, root_plus - anchor, 12);
  AnchoredRoot out{anchor, mu};
  if (family_of(j) == Branch::minus) out = {std::conj(anchor), std::conj(mu)};
  return out;
}

double expansion_residual_e(double k, int j, Regime regime, const RegimeThresholds& thr) {
  const ExpansionTerms terms = expansion_e_terms(k, j, regime, thr);
  const AnchoredRoot root = anchored_root_e(k, j, regime, thr);
  return std::abs(root.offset - terms.correction);
}

// ---------------------------------------------------------------------------

EigPairF eigvec_f(double k, double gamma, Branch branch) {
  const FSymbol s = eigen_f(k, gamma);
  const Complex lam = branch == Branch::plus ? s.lambda_plus : s.lambda_minus;
  const Complex other = branch == Branch::plus ? s.lambda_minus : s.lambda_plus;
  EigPairF e;
  e.lambda = lam;
  e.right << lam, 1.0;
  e.left << 1.0, -other;
  e.normalization = e.left.transpose() * e.right;
  return e;
}

Complex eigvec_e_normalization(const ESymbol& sym, int j) {
  require_label(j);
  const int base = j <= 3 ? 0 : 3;
  const Complex lam = sym(j);
  Complex prod = 1.0;
  for (int n = base; n < base + 3; ++n)
    if (n != j - 1) prod *= lam - sym.lambda[static_cast<std::size_t>(n)];
  return -2.0 * prod / (lam * other_root_sum(family_of(j), sym.k, lam));
}

EigPairE eigvec_e(const ESymbol& sym, int j) {
  require_label(j);
  const double k = sym.k;
  require(!(k == 0.0 && (j == 1 || j == 4)), "eigvec_e: j in {1,4} is undefined at k = 0");
  const Complex lam = sym(j);
  const Complex lam_sum = other_root_sum(family_of(j), k, lam);

  const Vec2c e(Complex(1.0), I);
  const Vec2c eb(Complex(1.0), -I);
  const Vec2c& pol = j <= 3 ? e : eb;
  const Vec2c& dual = j <= 3 ? eb : e;
  const double sgn = j <= 3 ? 1.0 : -1.0;
  const Complex kl = k / lam;

  EigPairE out;
  out.lambda = lam;
  out.right << pol / lam_sum, pol, -sgn * kl * pol;
  out.left << -dual / lam_sum, dual, sgn * kl * dual;
  out.normalization = out.left.transpose() * out.right;
  return out;
}

EigPairE eigvec_e(double k, int j) { return eigvec_e(label_spectrum_e(k), j); }

}  // namespace em1d
