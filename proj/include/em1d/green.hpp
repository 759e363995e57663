#pragma once

#include <array>

#include "em1d/spectrum.hpp"

namespace em1d {

enum class PropagatorSource { spectral, closed_form, expm_fallback, oracle };

const char* to_string(PropagatorSource s);

template <int N>
struct PropagatorMatrix {
  double t = 0.0;
  double k = 0.0;
  Eigen::Matrix<Complex, N, N> entries;
  PropagatorSource source = PropagatorSource::spectral;
};

using PropagatorF = PropagatorMatrix<2>;
using PropagatorE = PropagatorMatrix<6>;

/// Below this |k| the e-system projectors P_1, P_4 are assembled from
/// k / lambda_1 = O(1/k) and green_e switches to the matrix exponential.
inline constexpr double kMinFallback = 1e-3;

/// exp(A) by scaling and squaring with the degree-13 Pade approximant,
/// after a power-of-two diagonal balancing of A.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// Closed-form 2x2 solution operator of d/dt y = -A1 y.
PropagatorF green_f(double t, double k, double gamma);
/// exp(-t A1) through expm.
PropagatorF expm_oracle_f(double t, double k, double gamma);

struct ProjectorSet {
  double k = 0.0;
  std::array<Mat6c, 6> P;  ///< P[j-1] for label j
};

/// Explicit rank-one blocks on I2 +- i O1 with the closed-form normalization.
ProjectorSet projectors_e(double k);
/// Same projectors built as right (x) left / (left^T right) from eigvec_e.
ProjectorSet projectors_e_outer(double k);

/// sum_j P_j e^{lambda_j t}; for |k| < kMinFallback it is expm(-t Ar) instead.
PropagatorE green_e(double t, double k);
/// exp(-t Ar) through expm, independent of the spectral construction.
PropagatorE expm_oracle(double t, double k);

/// Envelope shapes (no constant). Entries are 1-based. The f-system switches
/// regime at sqrt(3 gamma)/(2 gamma); the e-system uses eps, R and the gap c.
double envelope_f(double t, double k, double gamma, int i, int j);
double envelope_e(double t, double k, int i, int j, const RegimeThresholds& thresholds);

}  // namespace em1d
