#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "em1d/fourier.hpp"
#include "em1d/linsolve.hpp"
#include "em1d/nonlinear.hpp"
#include "em1d/spectrum.hpp"

namespace em1d {

// ---------------------------------------------------------------------------
// Norms

/// ||d^alpha f||_{L2(torus)}.
double derivative_norm(const ModeField& f, int alpha);
/// (sum_{alpha <= s} ||d^alpha f||^2)^{1/2}, summed over the given fields.
double sobolev_norm(const ModeField& f, int s);
double sobolev_norm(std::span<const ModeField> fields, int s);
/// max |f(x_n)| over grid points.
double sup_norm(const ModeField& f);

// ---------------------------------------------------------------------------
// Energy

struct EnergyReport {
  double E_N = 0.0;  ///< sum_{alpha <= N} of the weighted energy of d^alpha W
  double D = 0.0;    ///< ||(rho,u1,u_r)||^2_{H^N} + ||(E1,E_r)||^2_{H^{N-1}} + ||dB_r||^2_{H^{N-2}}
  double M1 = 0.0;   ///< ||d(rho,u1)||_inf + ||u1||_inf ||d rho||_inf + ||rho||_inf ||d u1||_inf
  double M2 = 0.0;   ///< ||d(rho,u1,u_r)||_inf + ||d rho||_inf ||u1||_inf + ||d u1||_inf ||rho||_inf
  double E0 = 0.0;   ///< zeroth-order weighted energy
  double L2_squared = 0.0;  ///< plain ||(rho,u,E,B)||^2
  /// E0 / L2_squared; within [1/2, 2] when ||rho||_inf <= 0.1.
  double equivalence_ratio() const { return L2_squared > 0.0 ? E0 / L2_squared : 1.0; }
};

/// Weighted energy of d^alpha W:
///   int P'(n)/n |d^a rho|^2 + n (|d^a u1|^2 + |d^a u_r|^2) dx + ||d^a (E1, E_r, B_r)||^2.
EnergyReport energy_report(const PhysState& s, const PressureLaw& law, int N);

// ---------------------------------------------------------------------------
// Rate fits

enum class FitMode { polynomial, exponential };
const char* to_string(FitMode m);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double t_a = 0.0, t_b = 0.0;
  int samples = 0;
  FitMode mode = FitMode::polynomial;
};

inline constexpr int kMinFitSamples = 8;

/// Least squares of log(value) against log(1+t) (polynomial) or t
/// (exponential) over samples with t_a <= t <= t_b.
RateFit fit_decay_rate(std::span<const double> times, std::span<const double> values, double t_a, double t_b,
                       FitMode mode = FitMode::polynomial);
RateFit fit_decay_rate(const TimeSeries& s, const std::string& column, double t_a, double t_b,
                       FitMode mode = FitMode::polynomial);

// ---------------------------------------------------------------------------
// Envelopes

enum class EntryClass { uu, uE, uB, Eu, EE, EB, Bu, BE, BB, f11, f12, f21, f22 };
const char* to_string(EntryClass c);

struct EnvelopeStat {
  LinearSystem system = LinearSystem::e;
  Regime regime = Regime::low;
  EntryClass entry = EntryClass::uu;
  double c_star = 0.0;  ///< sup |G_ij| / shape_ij
  int samples = 0;
};

struct EnvelopeReport {
  std::vector<EnvelopeStat> stats;
  double c_star = 0.0;  ///< max over stats
  double ceiling = 50.0;
  bool within_ceiling() const { return c_star <= ceiling; }
};

/// Samples |G(t,k)| against the envelope shapes over ts x ks. Entries whose
/// shape underflows (< 1e-280) are skipped.
EnvelopeReport envelope_ratio_check(LinearSystem sys, std::span<const double> ts, std::span<const double> ks,
                                    const RegimeThresholds& thresholds, double gamma = 1.0, double ceiling = 50.0);

/// Fitted -slope of log max_{k in mid band} |G_e(t,k)|_max against t.
double mid_band_decay_rate(std::span<const double> ts, const RegimeThresholds& thresholds, int k_points = 64);

// ---------------------------------------------------------------------------
// Lower envelope (sharpness bands)

struct Band {
  double min = 0.0, max = 0.0;
  double theta = 0.0;
  double ratio() const { return min > 0.0 ? max / min : INFINITY; }
};

/// Band of (1+t)^theta * value over t_a <= t <= t_b.
Band lower_envelope_check(std::span<const double> times, std::span<const double> values, double theta, double t_a,
                          double t_b);

// ---------------------------------------------------------------------------
// Auxiliary functionals

/// Running sup over samples of
///   sum_{a=0,1} (1+s)^{5/4+a/2} ||d^a(rho,u1)|| + (1+s)^{5/4} ||d^a E1||
///             + (1+s)^{3/4+a/2} ||d^a(u_r,E_r)|| + (1+s)^{1/4+a/2} ||d^a B_r||
///   + ||d^2(rho,u1,u_r,B_r)||_{H^2}.
/// Needs columns <f> and d1_<f> for f in rho,u1,E1,u_r,E_r,B_r and "d2H2".
std::vector<double> q_functional(const TimeSeries& s);
/// Q at the last sample with time <= t.
double q_functional(const TimeSeries& s, double t);

struct GNResult {
  double lhs = 0.0;  ///< ||d^j f||
  double rhs = 0.0;  ///< ||d^m f||^a ||d^b f||^{1-a}
  double a = 0.0;    ///< (j - b) / (m - b)
  double C = 0.0;    ///< lhs / rhs, 0 for a zero field
};

/// ||d^j f|| <= C ||d^m f||^a ||d^b f||^{1-a}, a = (j-b)/(m-b), b <= j < m <= 4.
GNResult gn_check(const ModeField& f, int j, int m, int b = 0);

}  // namespace em1d
