#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "em1d/fourier.hpp"
#include "em1d/kernels.hpp"
#include "em1d/spectrum.hpp"

namespace em1d {

enum class ProfileFamily { gaussian, bump, random_band_limited };

ProfileFamily parse_profile_family(const std::string& s);
const char* to_string(ProfileFamily f);

/// Physical components, in the order used by ProfileSpec::weights.
enum class Component { rho, u1, E1, u2, u3, E2, E3, B2, B3 };
inline constexpr int kComponentCount = 9;

struct ProfileSpec {
  ProfileFamily family = ProfileFamily::gaussian;
  double amplitude = 1.0;
  double width = 2.0;
  std::uint64_t seed = 0;
  /// Field c(x) = weights[c] * phi(x). Default: B_r0 = (phi, 0).
  std::array<double, kComponentCount> weights{0, 0, 0, 0, 0, 0, 0, 1, 0};
  /// Lower-bound studies require inf_{|k|<=eps} |B_r0^(k)| >= d0.
  bool lower_bound_study = false;
  double d0 = -1.0;  ///< negative: amplitude / 2
  double eps = 0.1;
};

/// A scalar shape phi times per-component weights, with phi's unitary
/// transform phi^(k) = (2 pi)^{-1/2} int phi(x) e^{-ikx} dx when available.
///   gaussian: phi = A exp(-x^2 / (2 w^2)),      phi^ = A w exp(-w^2 k^2 / 2)
///   bump:     phi = A exp(1 - 1/(1 - (x/w)^2)) on |x| < w, transform by quadrature
///   random:   band-limited to |k| <= 1/w on the grid, no continuum transform
/// Gauss's law fixes one of rho, E1 from the other (rho = -dE1/dx).
class InitProfile {
 public:
  explicit InitProfile(const ProfileSpec& spec);

  const ProfileSpec& spec() const { return spec_; }
  double weight(Component c) const { return spec_.weights[static_cast<std::size_t>(c)]; }
  double d0() const { return d0_; }
  bool has_analytic_transform() const { return spec_.family != ProfileFamily::random_band_limited; }

  /// phi(x) centered at the origin (gaussian, bump).
  double shape(double x) const;
  /// phi^(k); rejects the random family.
  double shape_hat(double k) const;
  /// int |phi|^2 dx.
  double shape_norm_squared() const;
  /// Largest |k| where phi^ is not negligible.
  double spectral_cutoff() const;
  /// inf over |k| <= eps of |B_r0^(k)|.
  double low_band_infimum(double eps) const;

 private:
  ProfileSpec spec_;
  double d0_ = 0.0;
  std::vector<double> bump_nodes_;    // quadrature nodes on (0, w)
  std::vector<double> bump_weights_;  // weights times phi(node)
};

InitProfile make_profile(const ProfileSpec& spec);

// ---------------------------------------------------------------------------
// Grid states

struct FState {
  Grid grid;
  std::vector<Vec2c> y;  ///< (u1^, E1^) per slot
};

struct EState {
  Grid grid;
  std::vector<Vec6c> y;  ///< (u_r^, E_r^, B_r^) per slot
};

struct LinearState {
  FState f;
  EState e;
  ModeField rho;
};

/// Samples the profile centered at L/2, transforms, zeroes every k = 0
/// coefficient and the e-system Nyquist slot, and applies Gauss's law.
LinearState grid_state(const InitProfile& profile, const Grid& grid);

FState propagate_f(const FState& s, double t, double gamma, Exec exec = Exec::parallel);
EState propagate_e(const EState& s, double t, Exec exec = Exec::parallel);

/// max_k |i k E1^(k) + rho^(k)|.
double constraint_residual(const FState& f, const ModeField& rho);

// ---------------------------------------------------------------------------
// Norms

enum class LinearSystem { f, e };
enum class Field { u1, E1, u_r, E_r, B_r };

const char* to_string(Field f);
Field parse_field(const std::string& s);
LinearSystem system_of(Field f);

struct NormRequest {
  Field field = Field::B_r;
  int alpha = 0;
  /// "B_r" for alpha = 0, "d1_B_r" for alpha = 1, ...
  std::string name() const;
};

struct ContinuumOptions {
  double gamma = 1.0;
  double rel_tol = 1e-8;
  int max_panels = 20000;
  RegimeThresholds thresholds{};
};

/// ||d^alpha field(t)||_{L^2(R)} from int |k|^{2 alpha} |(G(t,k) y0^(k))_field|^2 dk
/// by adaptive Gauss-Kronrod (7/15) over panels split at the regime
/// boundaries and at the diffusive scales c / sqrt(t).
double l2_norm_continuum(const InitProfile& profile, double t, const NormRequest& req, const ContinuumOptions& opt = {});

/// All fields of one system at once, in the order of fields_of(system).
std::vector<double> continuum_norms(LinearSystem sys, const InitProfile& profile, double t, int alpha,
                                    const ContinuumOptions& opt = {});
std::vector<Field> fields_of(LinearSystem sys);

/// ||d^alpha field||_{L^2(torus)} from grid coefficients by Parseval.
double grid_norm(const LinearState& s, const NormRequest& req);

// ---------------------------------------------------------------------------
// Time series

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> columns;
  std::string evaluator;

  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
  void add(const std::string& name, std::vector<double> values);
};

std::vector<double> log_times(double t0, double t1, int n);

TimeSeries sample_series(const InitProfile& profile, const std::vector<double>& times,
                         const std::vector<NormRequest>& requests, const ContinuumOptions& opt = {});
TimeSeries sample_series_grid(const InitProfile& profile, const Grid& grid, const std::vector<double>& times,
                              const std::vector<NormRequest>& requests, double gamma = 1.0, Exec exec = Exec::parallel);

/// Long format: t,norm_name,value,evaluator.
std::string to_csv(const TimeSeries& s);

}  // namespace em1d
