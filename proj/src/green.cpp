#include "em1d/green.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

namespace em1d {

const char* to_string(PropagatorSource s) {
  switch (s) {
    case PropagatorSource::spectral: return "spectral";
    case PropagatorSource::closed_form: return "closed-form";
    case PropagatorSource::expm_fallback: return "expm-fallback";
    case PropagatorSource::oracle: return "oracle";
  }
  return "?";
}

namespace {

// Parlett-Reinsch balancing with power-of-two factors: returns d with
// D^{-1} A D balanced in place. The similarity is exact in floating point.
Eigen::VectorXd balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double total = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * total) {
        done = false;
        d(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return d;
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& input) {
  require(input.rows() == input.cols(), "expm: matrix must be square");
  Eigen::MatrixXcd a = input;
  const Eigen::VectorXd dscale = balance(a);
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw NumericalError("expm: non-finite input");
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, s);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd x2 = x * x;
  const Eigen::MatrixXcd x4 = x2 * x2;
  const Eigen::MatrixXcd x6 = x4 * x2;
  const Eigen::MatrixXcd u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const Eigen::MatrixXcd v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

  Eigen::MatrixXcd r = Eigen::PartialPivLU<Eigen::MatrixXcd>(v - u).solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return dscale.asDiagonal() * r * dscale.cwiseInverse().asDiagonal();
}

PropagatorF green_f(double t, double k, double gamma) {
  require(t >= 0.0, "green_f: t must be nonnegative");
  const FSymbol s = eigen_f(k, gamma);
  const Complex lp = s.lambda_plus, lm = s.lambda_minus;
  const Complex d = lp - lm;
  const Complex ep = std::exp(lp * t), em = std::exp(lm * t);
  PropagatorF g{t, k, Mat2c(), PropagatorSource::closed_form};
  g.entries(0, 0) = (lp * ep - lm * em) / d;
  g.entries(0, 1) = -(1.0 + gamma * k * k) * (ep - em) / d;
  g.entries(1, 0) = (ep - em) / d;
  g.entries(1, 1) = (lp * em - lm * ep) / d;
  return g;
}

PropagatorF expm_oracle_f(double t, double k, double gamma) {
  require(t >= 0.0, "expm_oracle_f: t must be nonnegative");
  const Eigen::MatrixXcd m = expm(-t * symbol_f(k, gamma));
  return PropagatorF{t, k, Mat2c(m), PropagatorSource::oracle};
}

namespace {

// Projector of one root; `plus` selects the I2 + i O1 family.
Mat6c projector(double k, Complex lam, Complex other_sum, Complex prod, bool plus) {
  const Complex scale = -lam * other_sum / (2.0 * prod);
  const double sg = plus ? 1.0 : -1.0;
  const Complex kl = k / lam;
  const Complex c[3] = {1.0 / other_sum, 1.0, -sg * kl};
  const Complex d[3] = {-1.0 / other_sum, 1.0, sg * kl};
  const Mat2c pol = Mat2c::Identity() + sg * I * rotation_generator();
  Mat6c p;
  for (int a = 0; a < 3; ++a)
    for (int b2 = 0; b2 < 3; ++b2) p.block<2, 2>(2 * a, 2 * b2) = (scale * c[a] * d[b2]) * pol;
  return p;
}

std::array<Mat6c, 3> family_projectors(double k, const std::array<Complex, 3>& r, bool plus) {
  const Branch b = plus ? Branch::plus : Branch::minus;
  std::array<Mat6c, 3> out;
  for (int j = 0; j < 3; ++j) {
    const Complex o1 = r[(j + 1) % 3], o2 = r[(j + 2) % 3];
    out[j] = projector(k, r[j], other_root_sum(b, k, r[j]), (r[j] - o1) * (r[j] - o2), plus);
  }
  return out;
}

}  // namespace

ProjectorSet projectors_e(double k) {
  require(std::abs(k) >= kMinFallback, "projectors_e: |k| below the fallback threshold, use expm");
  const ESymbol s = label_spectrum_e(k);
  const std::array<Complex, 3> rp{s.lambda[0], s.lambda[1], s.lambda[2]};
  const std::array<Complex, 3> rm{s.lambda[3], s.lambda[4], s.lambda[5]};
  const auto pp = family_projectors(k, rp, true);
  const auto pm = family_projectors(k, rm, false);
  ProjectorSet set;
  set.k = k;
  for (int j = 0; j < 3; ++j) {
    set.P[j] = pp[j];
    set.P[3 + j] = pm[j];
  }
  return set;
}

ProjectorSet projectors_e_outer(double k) {
  require(std::abs(k) >= kMinFallback, "projectors_e_outer: |k| below the fallback threshold, use expm");
  const ESymbol s = label_spectrum_e(k);
  ProjectorSet set;
  set.k = k;
  for (int j = 1; j <= 6; ++j) {
    const EigPairE e = eigvec_e(s, j);
    set.P[j - 1] = e.right * e.left.transpose() / e.normalization;
  }
  return set;
}

PropagatorE expm_oracle(double t, double k) {
  require(t >= 0.0, "expm_oracle: t must be nonnegative");
  const Eigen::MatrixXcd m = expm(-t * symbol_e(k));
  return PropagatorE{t, k, Mat6c(m), PropagatorSource::oracle};
}

PropagatorE green_e(double t, double k) {
  require(t >= 0.0, "green_e: t must be nonnegative");
  if (std::abs(k) < kMinFallback) {
    PropagatorE g = expm_oracle(t, k);
    g.source = PropagatorSource::expm_fallback;
    return g;
  }
  PropagatorE g{t, k, Mat6c::Zero(), PropagatorSource::spectral};
  for (Branch b : {Branch::plus, Branch::minus}) {
    const auto r = roots_e(b, k);
    const auto p = family_projectors(k, r, b == Branch::plus);
    for (int j = 0; j < 3; ++j) g.entries += p[j] * std::exp(r[j] * t);
  }
  return g;
}

// ---------------------------------------------------------------------------

double envelope_f(double t, double k, double gamma, int i, int j) {
  require(i >= 1 && i <= 2 && j >= 1 && j <= 2, "envelope_f: entry must be in 1..2");
  const double decay = std::exp(-0.5 * t);
  if (std::abs(k) <= f_regime_boundary(gamma)) return decay;
  if (i == 1 && j == 2) return std::abs(k) * decay;
  if (i == 2 && j == 1) return decay / std::abs(k);
  return decay;
}

double envelope_e(double t, double k, int i, int j, const RegimeThresholds& thr) {
  require(i >= 1 && i <= 6 && j >= 1 && j <= 6, "envelope_e: entry must be in 1..6");
  const int p = (i - 1) / 2, q = (j - 1) / 2;
  const double ak = std::abs(k);
  switch (thr.classify(k)) {
    case Regime::low: {
      // block order u, E, B
      const double a[3][3] = {{ak * ak, ak * ak, ak}, {ak * ak, ak * ak, ak}, {ak, ak, 1.0}};
      const double b[3][3] = {{1.0, 1.0, ak}, {1.0, 1.0, ak}, {ak, ak, ak * ak}};
      return a[p][q] * std::exp(-0.5 * k * k * t) + b[p][q] * std::exp(-t / 8.0);
    }
    case Regime::high: {
      const double m1 = 1.0 / ak, m2 = m1 * m1, m3 = m2 * m1, m4 = m2 * m2;
      const double a[3][3] = {{1.0, m2, m1}, {m2, m4, m3}, {m1, m3, m2}};
      const double b[3][3] = {{m2, m1, m1}, {m1, 1.0, 1.0}, {m1, 1.0, 1.0}};
      return a[p][q] * std::exp(-0.5 * t) + b[p][q] * std::exp(-t / (4.0 * k * k));
    }
    case Regime::mid:
      return std::exp(-thr.c * t);
  }
  return 0.0;
}

}  // namespace em1d
