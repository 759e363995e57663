#pragma once

#include <array>
#include <span>
#include <vector>

#include "em1d/types.hpp"

namespace em1d {

enum class Branch { plus, minus };
enum class Regime { low, mid, high };

const char* to_string(Regime r);

// ---------------------------------------------------------------------------
// Symbols. Both linear subsystems read  d/dt y = -A(k) y  in Fourier space.

/// (u1, E1) symbol: A1 = (1  1+gamma k^2; -1  0).
Mat2c symbol_f(double k, double gamma);
/// (u_r, E_r, B_r) symbol: Ar = (I-O1  I  0; -I  0  -ik O1; 0  ik O1  0).
Mat6c symbol_e(double k);

// ---------------------------------------------------------------------------
// f-system: closed-form eigenvalues of det(lambda I + A1) = 0.

struct FSymbol {
  double k = 0.0;
  double gamma = 1.0;
  Complex lambda_plus;
  Complex lambda_minus;
};

FSymbol eigen_f(double k, double gamma);

/// |k| below which the f-system is in its low-frequency regime: sqrt(3 gamma)/(2 gamma).
double f_regime_boundary(double gamma);

/// Truncated series for lambda_+/-; `low` needs |k| <= boundary, `high` needs |k| > boundary.
std::array<Complex, 2> expansion_f(double k, double gamma, Regime regime);

/// |lambda_+(k) - series_+(k)| evaluated without cancellation against the
/// leading term, so the remainder stays resolvable far past where a plain
/// difference of doubles bottoms out.
double expansion_residual_f(double k, double gamma, Regime regime);

// ---------------------------------------------------------------------------
// e-system: det(lambda I + Ar) = g+(lambda) g-(lambda) with
//   g+-(lambda) = lambda^3 + (1 +- i) lambda^2 + (k^2 + 1) lambda + (1 +- i) k^2.

Complex char_poly_e(Branch sign, double k, Complex lam);

/// Roots of z^3 + b z^2 + c z + d by Cardano in complex arithmetic, each
/// then Newton-polished against the cubic. Throws NumericalError when
/// polishing leaves a residual or Vieta defect above the gate.
std::array<Complex, 3> solve_monic_cubic(Complex b, Complex c, Complex d);

/// Sum of the two roots of g^sign other than lam, i.e. -(1 +- i) - lam,
/// refined on the shifted cubic. At large |k| the sum for lambda_1 is
/// O(1/k^2) while the two roots are O(k), so adding them directly loses
/// digits.
Complex other_root_sum(Branch sign, double k, Complex lam);

/// Three roots of g^sign at k, unlabeled.
std::array<Complex, 3> roots_e(Branch sign, double k);

struct RegimeThresholds {
  double eps = 0.1;
  double R = 10.0;
  double c = 0.0;  ///< empirical mid-band gap, min over eps <= |k| <= R of -Re lambda

  Regime classify(double k) const;
};

/// Default thresholds with c measured on a log grid of `points` over [eps, R].
RegimeThresholds measure_thresholds(double eps = 0.1, double R = 10.0, int points = 4096);

/// Six labeled eigenvalues. lambda[0..2] are the roots of g+ continued from
/// the k = 0 anchors {0, z2, z3}; lambda[3..5] are the matching g- roots.
struct ESymbol {
  double k = 0.0;
  std::array<Complex, 6> lambda{};
  Regime regime = Regime::low;
  /// Smallest distance between a g+ root and a g- root. At large |k| the
  /// pairs (lambda_2, lambda_6) and (lambda_3, lambda_5) approach each other
  /// like 1/k^2.
  double cross_family_distance = 0.0;
  bool cross_family_collision = false;  ///< cross_family_distance < 1e-10

  Complex operator()(int j) const { return lambda[static_cast<std::size_t>(j - 1)]; }
};

/// Walks the g+ roots from k = 0 with geometric steps (at most 10% relative)
/// and nearest-match assignment against a linear predictor. Steps are halved
/// whenever the assignment is not clear-cut.
class SpectrumTracker {
 public:
  SpectrumTracker();

  double k() const { return k_; }
  const std::array<Complex, 3>& roots() const { return cur_; }
  /// Advances to |k|; k must not be smaller than the current position.
  void advance_to(double k_abs);

 private:
  bool try_step(double k_next);

  double k_ = 0.0;
  double prev_k_ = 0.0;
  std::array<Complex, 3> cur_{};
  std::array<Complex, 3> prev_{};
  bool has_prev_ = false;
};

ESymbol label_spectrum_e(double k, const RegimeThresholds& thresholds = {});
/// Labels a whole grid with one continuation pass in increasing |k|;
/// results come back in input order.
std::vector<ESymbol> label_spectrum_e(std::span<const double> ks, const RegimeThresholds& thresholds = {});

/// Low-k anchors z2, z3 = -(1+i)/2 +- sqrt(2i-4)/2.
Complex anchor_z2();
Complex anchor_z3();

/// A root split as anchor + offset, with the offset solved directly from the
/// polynomial shifted to the anchor (no cancellation against the anchor).
struct AnchoredRoot {
  Complex anchor;
  Complex offset;
  Complex value() const { return anchor + offset; }
};

/// Series for lambda_j split the same way: anchor plus correction terms.
struct ExpansionTerms {
  Complex anchor;
  Complex correction;
  Complex value() const { return anchor + correction; }
};

/// j in 1..6; regime low or high. Low expansions require |k| <= eps, high
/// ones |k| >= R (thresholds given).
ExpansionTerms expansion_e_terms(double k, int j, Regime regime, const RegimeThresholds& thresholds = {});
Complex expansion_e(double k, int j, Regime regime, const RegimeThresholds& thresholds = {});
AnchoredRoot anchored_root_e(double k, int j, Regime regime, const RegimeThresholds& thresholds = {});
/// |lambda_j(k) - expansion_j(k)| in the anchored representation.
double expansion_residual_e(double k, int j, Regime regime, const RegimeThresholds& thresholds = {});

/// min_j(-Re lambda_j) over all six eigenvalues; rejects k = 0.
double spectral_gap_e(double k);

// ---------------------------------------------------------------------------
// Eigenvectors. `left` holds the conjugated left eigenvector, i.e. the row
// with left^T (-A) = lambda left^T; normalization = left^T right.

template <int N>
struct EigPair {
  Complex lambda;
  Eigen::Matrix<Complex, N, 1> right;
  Eigen::Matrix<Complex, N, 1> left;
  Complex normalization;
};

using EigPairF = EigPair<2>;
using EigPairE = EigPair<6>;

EigPairF eigvec_f(double k, double gamma, Branch branch);

/// j in 1..6. For j in {1, 4} and k = 0 the vector is undefined
/// (k / lambda_1 is 0/0) and the call is rejected.
EigPairE eigvec_e(double k, int j);
EigPairE eigvec_e(const ESymbol& sym, int j);

/// Closed-form normalization -2 prod_{n != j}(lambda_j - lambda_n) / (lambda_j Lambda_j)
/// over the family of j.
Complex eigvec_e_normalization(const ESymbol& sym, int j);

}  // namespace em1d
