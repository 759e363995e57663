#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "em1d/fourier.hpp"
#include "em1d/kernels.hpp"
#include "em1d/linsolve.hpp"

namespace em1d {

/// P(n) = K n^a.
struct PressureLaw {
  double K = 1.0;
  double a = 1.0;

  PressureLaw() = default;
  PressureLaw(double K_, double a_);

  double pressure(double n) const { return K * std::pow(n, a); }
  double derivative(double n) const { return K * a * std::pow(n, a - 1.0); }
  /// gamma = P'(1).
  double gamma() const { return K * a; }
  /// P'(n)/n - gamma, the coefficient of d rho in h1.
  double pressure_coefficient(double n) const { return derivative(n) / n - gamma(); }
};

inline constexpr double kDensityFloor = 0.1;

/// Perturbation state around n = 1, u = 0, E = 0, B = (1, 0, 0), stored as
/// Fourier coefficients (slot order, forward-normalized). B1 = 1 is implicit.
struct PhysState {
  Grid grid;
  double t = 0.0;
  ModeField rho, u1, E1;
  std::array<ModeField, 2> u_r, E_r, B_r;

  explicit PhysState(const Grid& g);

  /// Physical samples of one component.
  std::vector<double> field(Component c) const;
  ModeField& modes(Component c);
  const ModeField& modes(Component c) const;
};

/// Builds the state from a profile (same construction as the linear grid
/// state), with every field dealiased.
PhysState make_state(const InitProfile& profile, const Grid& grid);
/// Converts to and from the decoupled linear states.
PhysState from_linear(const LinearState& s);
LinearState to_linear(const PhysState& s);

/// Multiplies every field (rho included) by c.
PhysState scaled(const PhysState& s, double c);

/// max_k |i k E1^ + rho^|.
double constraint_residual(const PhysState& s);

/// Source terms on the grid:
///   h1 = -u1 du1 - (P'(rho+1)/(rho+1) - gamma) drho + u_r . O1 B_r
///   h2 = rho u1
///   h3 = -u1 du_r - u1 O1 B_r
///   h4 = rho u_r
struct NonlinearTerms {
  std::vector<double> h1, h2;
  std::array<std::vector<double>, 2> h3, h4;
};

/// Physical-space evaluation with spectral derivatives. Throws
/// NumericalError when n = rho + 1 drops below the density floor.
NonlinearTerms nonlinear_terms(const PhysState& s, const PressureLaw& law, Exec exec = Exec::parallel);

/// Dealiased (2/3 rule) coefficients of the sources, in the layout of the
/// linear states: f gets (h1, h2), e gets (h3, h4, 0).
struct SourceModes {
  std::vector<Vec2c> f;
  std::vector<Vec6c> e;
};
SourceModes source_modes(const PhysState& s, const PressureLaw& law, Exec exec = Exec::parallel);

/// Thrown on a NaN, a density floor violation or runaway growth; carries the
/// last good state.
class StepFailure : public NumericalError {
 public:
  StepFailure(const std::string& what, PhysState last) : NumericalError(what), last_(std::move(last)) {}
  const PhysState& last_state() const { return last_; }

 private:
  PhysState last_;
};

/// Integrating-factor midpoint stepper. Linear flows G(dt) and G(dt/2) are
/// tabulated once per dt.
///   Y* = G(dt/2) [Y_n + dt/2 N(Y_n)]
///   Y_{n+1} = G(dt) Y_n + dt G(dt/2) N(Y*)
/// rho is advanced by the mass flux, rho^_{n+1} = rho^_n - ik (E1^_{n+1} - E1^_n),
/// then E1^ is projected back to i rho^/k for k != 0.
class Stepper {
 public:
  Stepper(const Grid& grid, double dt, const PressureLaw& law, Exec exec = Exec::parallel);

  double dt() const { return dt_; }
  const PressureLaw& law() const { return law_; }

  PhysState step(const PhysState& s) const;
  /// Residual of Gauss's law after the last step, before projection.
  double last_drift() const { return last_drift_; }

 private:
  Grid grid_;
  double dt_;
  PressureLaw law_;
  Exec exec_;
  BlockTable2 gf_full_, gf_half_;
  BlockTable6 ge_full_, ge_half_;
  mutable double last_drift_ = 0.0;
};

/// One step from scratch (tabulates the flows each call).
PhysState step(const PhysState& s, double dt, const PressureLaw& law, Exec exec = Exec::parallel);

/// dt <= 0.5 dx / max |u1| (infinite for u1 = 0).
double cfl_limit(const PhysState& s);

struct RunConfig {
  double L = 200.0 * kPi;
  int N = 1024;
  double t_end = 200.0;
  double dt = 0.05;          ///< upper bound, reduced by the CFL limit
  double sample_every = 1.0; ///< time between series samples
  int snapshot_every = 0;    ///< in samples; 0 disables snapshots
  int energy_order = 4;      ///< N in E_N
  double delta0 = 1e-3;      ///< initial data rescaled to this H^N norm; <= 0 keeps the profile amplitude
  double delta_max = 0.1;    ///< small-data guard on the initial H^N norm
  double growth_limit = 1e3; ///< abort when the H^N norm exceeds this multiple of its initial value
  PressureLaw law{};
  ProfileSpec profile = default_nonlinear_profile();
  Exec exec = Exec::parallel;

  static ProfileSpec default_nonlinear_profile();
};

struct RunResult {
  TimeSeries series;
  std::vector<PhysState> snapshots;
  double dt = 0.0;
  int steps = 0;
  double max_constraint = 0.0;  ///< after projection, over all steps
  double max_drift = 0.0;       ///< before projection, over all steps
};

/// Runs from the configured profile. Series columns: per field the L2 norm,
/// d1..d4 norms and sup norm; E_N, D, int_D, M1, M2, constraint, Q.
RunResult run(const RunConfig& cfg);
/// Runs from an explicit initial state (t_end, dt, sampling from cfg).
RunResult run(const RunConfig& cfg, PhysState initial);

}  // namespace em1d
