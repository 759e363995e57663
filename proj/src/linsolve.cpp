#include "em1d/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "em1d/green.hpp"
#include "em1d/quadrature.hpp"

namespace em1d {

ProfileFamily parse_profile_family(const std::string& s) {
  if (s == "gaussian") return ProfileFamily::gaussian;
  if (s == "bump") return ProfileFamily::bump;
  if (s == "random-band-limited") return ProfileFamily::random_band_limited;
  throw InvalidArgument("unknown profile family '" + s + "' (gaussian | bump | random-band-limited)");
}

const char* to_string(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::bump: return "bump";
    case ProfileFamily::random_band_limited: return "random-band-limited";
  }
  return "?";
}

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double bump_shape(double x, double w) {
  const double s = x / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

InitProfile::InitProfile(const ProfileSpec& spec) : spec_(spec) {
  require(spec.amplitude > 0.0, "profile amplitude must be positive");
  require(spec.width > 0.0, "profile width must be positive");
  const double w_rho = weight(Component::rho), w_e1 = weight(Component::E1);
  require(!(w_rho != 0.0 && w_e1 != 0.0), "profile: give at most one of rho and E1 weights (Gauss's law ties them)");
  if (w_rho != 0.0 && spec.family != ProfileFamily::random_band_limited)
    throw InvalidArgument(
        "profile: compatibility unsatisfiable, a rho profile with nonzero mean forces E1 = -int rho outside L^2");

  if (spec.family == ProfileFamily::bump) {
    // composite 16-point Gauss-Legendre on (0, w)
    const GaussRule g = gauss_legendre(16);
    const int panels = 256;
    const double h = spec.width / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = h * (p + 0.5 * (g.nodes[i] + 1.0));
        bump_nodes_.push_back(x);
        bump_weights_.push_back(0.5 * h * g.weights[i] * spec.amplitude * bump_shape(x, spec.width));
      }
  }

  d0_ = spec.d0 < 0.0 ? 0.5 * spec.amplitude : spec.d0;
  if (spec.lower_bound_study) {
    require(spec.eps > 0.0, "profile: eps must be positive");
    require(has_analytic_transform(), "profile: lower-bound studies need an analytic transform");
    const double inf = low_band_infimum(spec.eps);
    if (inf < d0_) {
      if (spec.family == ProfileFamily::bump)
        throw InvalidArgument("profile: bump too narrow for requested d0 (inf |B_r0^| = " + std::to_string(inf) +
                              " < d0 = " + std::to_string(d0_) + ")");
      throw InvalidArgument("profile: inf |B_r0^| = " + std::to_string(inf) + " below d0 = " + std::to_string(d0_));
    }
  }
}

InitProfile make_profile(const ProfileSpec& spec) { return InitProfile(spec); }

double InitProfile::shape(double x) const {
  switch (spec_.family) {
    case ProfileFamily::gaussian: return spec_.amplitude * std::exp(-x * x / (2.0 * spec_.width * spec_.width));
    case ProfileFamily::bump: return spec_.amplitude * bump_shape(x, spec_.width);
    case ProfileFamily::random_band_limited: break;
  }
  throw InvalidArgument("profile: the random family has no closed-form shape");
}

double InitProfile::shape_hat(double k) const {
  switch (spec_.family) {
    case ProfileFamily::gaussian: {
      const double w = spec_.width;
      return spec_.amplitude * w * std::exp(-0.5 * w * w * k * k);
    }
    case ProfileFamily::bump: {
      double s = 0.0;
      for (std::size_t i = 0; i < bump_nodes_.size(); ++i) s += bump_weights_[i] * std::cos(k * bump_nodes_[i]);
      return 2.0 * kInvSqrt2Pi * s;
    }
    case ProfileFamily::random_band_limited: break;
  }
  throw InvalidArgument("profile: the random family has no analytic transform");
}

double InitProfile::shape_norm_squared() const {
  switch (spec_.family) {
    case ProfileFamily::gaussian: return spec_.amplitude * spec_.amplitude * spec_.width * std::sqrt(kPi);
    case ProfileFamily::bump: {
      double s = 0.0;
      for (std::size_t i = 0; i < bump_nodes_.size(); ++i) {
        const double phi = spec_.amplitude * bump_shape(bump_nodes_[i], spec_.width);
        s += bump_weights_[i] * phi;
      }
      return 2.0 * s;
    }
    case ProfileFamily::random_band_limited: break;
  }
  throw InvalidArgument("profile: the random family has no closed-form norm");
}

double InitProfile::spectral_cutoff() const {
  switch (spec_.family) {
    case ProfileFamily::gaussian: return 10.0 / spec_.width;
    case ProfileFamily::bump: return 400.0 / spec_.width;
    case ProfileFamily::random_band_limited: return 1.0 / spec_.width;
  }
  return 0.0;
}

double InitProfile::low_band_infimum(double eps) const {
  const double wb = std::hypot(weight(Component::B2), weight(Component::B3));
  double m = std::abs(shape_hat(0.0));
  for (int i = 1; i <= 64; ++i) m = std::min(m, std::abs(shape_hat(eps * i / 64.0)));
  return wb * m;
}

// ---------------------------------------------------------------------------

LinearState grid_state(const InitProfile& profile, const Grid& grid) {
  const int n = grid.size();
  const auto& spec = profile.spec();

  std::vector<double> phi(static_cast<std::size_t>(n));
  if (spec.family == ProfileFamily::random_band_limited) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> nd;
    ModeField m(grid);
    const int jmax = std::min(n / 2 - 1, static_cast<int>(std::floor(1.0 / (spec.width * grid.dk()))));
    for (int j = 1; j <= jmax; ++j) {
      const Complex c(nd(rng), nd(rng));
      m[grid.slot_of(j)] = c;
      m[grid.slot_of(-j)] = std::conj(c);
    }
    phi = inverse(m);
    double peak = 0.0;
    for (double v : phi) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
      for (double& v : phi) v *= spec.amplitude / peak;
  } else {
    const double c = 0.5 * grid.length();
    for (int i = 0; i < n; ++i) phi[static_cast<std::size_t>(i)] = profile.shape(grid.x(i) - c);
  }
  ModeField base = forward(grid, phi);
  base[0] = 0.0;
  base[n / 2] = 0.0;

  LinearState s{FState{grid, std::vector<Vec2c>(static_cast<std::size_t>(n), Vec2c::Zero())},
                EState{grid, std::vector<Vec6c>(static_cast<std::size_t>(n), Vec6c::Zero())}, ModeField(grid)};
  const double w_rho = profile.weight(Component::rho);
  const double w_e1 = profile.weight(Component::E1);
  const Component ecomp[6] = {Component::u2, Component::u3, Component::E2, Component::E3, Component::B2, Component::B3};
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const double k = grid.wavenumber(i);
    const Complex b = base[i];
    s.f.y[si](0) = profile.weight(Component::u1) * b;
    if (w_rho != 0.0) {
      s.rho[i] = w_rho * b;
      s.f.y[si](1) = k == 0.0 ? Complex(0.0) : I * s.rho[i] / k;
    } else {
      s.f.y[si](1) = w_e1 * b;
      s.rho[i] = -I * k * s.f.y[si](1);
    }
    for (int c = 0; c < 6; ++c) s.e.y[si](c) = profile.weight(ecomp[c]) * b;
  }
  return s;
}

FState propagate_f(const FState& s, double t, double gamma, Exec exec) {
  require(t >= 0.0, "propagate_f: t must be nonnegative");
  FState out = s;
  apply_blocks(green_f_table(s.grid, t, gamma, exec), out.y, exec);
  return out;
}

EState propagate_e(const EState& s, double t, Exec exec) {
  require(t >= 0.0, "propagate_e: t must be nonnegative");
  EState out = s;
  apply_blocks(green_e_table(s.grid, t, exec), out.y, exec);
  return out;
}

double constraint_residual(const FState& f, const ModeField& rho) {
  double worst = 0.0;
  for (int i = 0; i < f.grid.size(); ++i)
    worst = std::max(worst, std::abs(I * f.grid.wavenumber(i) * f.y[static_cast<std::size_t>(i)](1) + rho[i]));
  return worst;
}

// ---------------------------------------------------------------------------

const char* to_string(Field f) {
  switch (f) {
    case Field::u1: return "u1";
    case Field::E1: return "E1";
    case Field::u_r: return "u_r";
    case Field::E_r: return "E_r";
    case Field::B_r: return "B_r";
  }
  return "?";
}

Field parse_field(const std::string& s) {
  for (Field f : {Field::u1, Field::E1, Field::u_r, Field::E_r, Field::B_r})
    if (s == to_string(f)) return f;
  throw InvalidArgument("unknown field '" + s + "'");
}

LinearSystem system_of(Field f) { return (f == Field::u1 || f == Field::E1) ? LinearSystem::f : LinearSystem::e; }

std::vector<Field> fields_of(LinearSystem sys) {
  if (sys == LinearSystem::f) return {Field::u1, Field::E1};
  return {Field::u_r, Field::E_r, Field::B_r};
}

std::string NormRequest::name() const {
  if (alpha == 0) return to_string(field);
  return "d" + std::to_string(alpha) + "_" + to_string(field);
}

std::vector<double> continuum_norms(LinearSystem sys, const InitProfile& profile, double t, int alpha,
                                    const ContinuumOptions& opt) {
  require(t >= 0.0, "continuum norm: t must be nonnegative");
  require(alpha >= 0, "continuum norm: alpha must be nonnegative");
  require(profile.has_analytic_transform(), "continuum norm: profile has no analytic transform");

  const int dim = sys == LinearSystem::f ? 2 : 3;
  Vec2c wf;
  wf << profile.weight(Component::u1), profile.weight(Component::E1);
  Vec6c we;
  we << profile.weight(Component::u2), profile.weight(Component::u3), profile.weight(Component::E2),
      profile.weight(Component::E3), profile.weight(Component::B2), profile.weight(Component::B3);

  const VectorIntegrand integrand = [&](double k, std::span<double> out) {
    const double phat = profile.shape_hat(k);
    const double kw = alpha == 0 ? 1.0 : std::pow(k, 2 * alpha);
    if (sys == LinearSystem::f) {
      const Vec2c v = t == 0.0 ? Vec2c(wf * phat) : Vec2c(green_f(t, k, opt.gamma).entries * (wf * phat));
      out[0] = 2.0 * kw * std::norm(v(0));
      out[1] = 2.0 * kw * std::norm(v(1));
    } else {
      const Vec6c v = t == 0.0 ? Vec6c(we * phat) : Vec6c(green_e(t, k).entries * (we * phat));
      for (int c = 0; c < 3; ++c) out[c] = 2.0 * kw * (std::norm(v(2 * c)) + std::norm(v(2 * c + 1)));
    }
  };

  const double kc = profile.spectral_cutoff();
  std::vector<double> bp{0.0, kc};
  auto add = [&](double x) {
    if (x > 0.0 && x < kc) bp.push_back(x);
  };
  add(kMinFallback);
  add(opt.thresholds.eps);
  add(f_regime_boundary(opt.gamma));
  add(opt.thresholds.R);
  if (t > 0.0) {
    for (double c : {0.5, 1.0, 2.0, 4.0, 8.0}) add(c / std::sqrt(t));
    for (double c : {0.25, 0.5, 1.0}) add(c * std::sqrt(t));
  }
  // components that vanish identically (t = 0) only carry squared roundoff
  const double energy = (sys == LinearSystem::f ? wf.squaredNorm() : we.squaredNorm()) * profile.shape_norm_squared();
  const auto r = integrate_gk15(integrand, dim, bp, opt.rel_tol, opt.max_panels, 1e-28 * energy);
  std::vector<double> norms(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) norms[d] = std::sqrt(std::max(0.0, r.value[d]));
  return norms;
}

double l2_norm_continuum(const InitProfile& profile, double t, const NormRequest& req, const ContinuumOptions& opt) {
  const LinearSystem sys = system_of(req.field);
  const auto fields = fields_of(sys);
  const auto norms = continuum_norms(sys, profile, t, req.alpha, opt);
  const auto it = std::find(fields.begin(), fields.end(), req.field);
  return norms[static_cast<std::size_t>(it - fields.begin())];
}

double grid_norm(const LinearState& s, const NormRequest& req) {
  const Grid& g = s.f.grid;
  double sum = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    const double k = g.wavenumber(i);
    const double kw = req.alpha == 0 ? 1.0 : std::pow(k * k, req.alpha);
    double v = 0.0;
    switch (req.field) {
      case Field::u1: v = std::norm(s.f.y[si](0)); break;
      case Field::E1: v = std::norm(s.f.y[si](1)); break;
      case Field::u_r: v = std::norm(s.e.y[si](0)) + std::norm(s.e.y[si](1)); break;
      case Field::E_r: v = std::norm(s.e.y[si](2)) + std::norm(s.e.y[si](3)); break;
      case Field::B_r: v = std::norm(s.e.y[si](4)) + std::norm(s.e.y[si](5)); break;
    }
    sum += kw * v;
  }
  return std::sqrt(g.length() * sum);
}

// ---------------------------------------------------------------------------

const std::vector<double>& TimeSeries::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.first == name) return c.second;
  throw InvalidArgument("time series has no column '" + name + "'");
}

bool TimeSeries::has(const std::string& name) const {
  return std::any_of(columns.begin(), columns.end(), [&](const auto& c) { return c.first == name; });
}

void TimeSeries::add(const std::string& name, std::vector<double> values) {
  require(values.size() == times.size(), "time series column '" + name + "' has the wrong length");
  for (auto& c : columns)
    if (c.first == name) {
      c.second = std::move(values);
      return;
    }
  columns.emplace_back(name, std::move(values));
}

std::vector<double> log_times(double t0, double t1, int n) {
  require(t0 > 0.0 && t1 > t0, "log_times: need 0 < t0 < t1");
  require(n >= 2, "log_times: need at least two samples");
  std::vector<double> v(static_cast<std::size_t>(n));
  const double a = std::log(t0), b = std::log(t1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  v.front() = t0;
  v.back() = t1;
  return v;
}

namespace {

void check_times(const std::vector<double>& times) {
  require(!times.empty(), "time series: empty time list");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0, "time series: negative time");
    if (i > 0) require(times[i] > times[i - 1], "time series: times must be strictly increasing");
  }
}

}  // namespace

TimeSeries sample_series(const InitProfile& profile, const std::vector<double>& times,
                         const std::vector<NormRequest>& requests, const ContinuumOptions& opt) {
  check_times(times);
  require(!requests.empty(), "time series: no norms requested");
  TimeSeries ts;
  ts.times = times;
  ts.evaluator = "continuum";
  for (const auto& r : requests) ts.columns.emplace_back(r.name(), std::vector<double>(times.size()));

  // one quadrature per (time, system, alpha) serves every field of that system
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    for (std::size_t ri = 0; ri < requests.size(); ++ri) {
      const auto& r = requests[ri];
      bool done = false;
      for (std::size_t rj = 0; rj < ri; ++rj)
        if (system_of(requests[rj].field) == system_of(r.field) && requests[rj].alpha == r.alpha) done = true;
      if (done) continue;
      const LinearSystem sys = system_of(r.field);
      const auto fields = fields_of(sys);
      const auto norms = continuum_norms(sys, profile, times[ti], r.alpha, opt);
      for (std::size_t rk = ri; rk < requests.size(); ++rk) {
        if (system_of(requests[rk].field) != sys || requests[rk].alpha != r.alpha) continue;
        const auto it = std::find(fields.begin(), fields.end(), requests[rk].field);
        ts.columns[rk].second[ti] = norms[static_cast<std::size_t>(it - fields.begin())];
      }
    }
  }
  return ts;
}

TimeSeries sample_series_grid(const InitProfile& profile, const Grid& grid, const std::vector<double>& times,
                              const std::vector<NormRequest>& requests, double gamma, Exec exec) {
  check_times(times);
  require(!requests.empty(), "time series: no norms requested");
  TimeSeries ts;
  ts.times = times;
  ts.evaluator = "grid";
  for (const auto& r : requests) ts.columns.emplace_back(r.name(), std::vector<double>(times.size()));
  const LinearState s0 = grid_state(profile, grid);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    LinearState s{propagate_f(s0.f, times[ti], gamma, exec), propagate_e(s0.e, times[ti], exec), s0.rho};
    for (std::size_t ri = 0; ri < requests.size(); ++ri) ts.columns[ri].second[ti] = grid_norm(s, requests[ri]);
  }
  return ts;
}

std::string to_csv(const TimeSeries& s) {
  std::ostringstream os;
  os.precision(17);
  os << "t,norm_name,value,evaluator\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    for (const auto& c : s.columns) os << s.times[i] << ',' << c.first << ',' << c.second[i] << ',' << s.evaluator << '\n';
  return os.str();
}

}  // namespace em1d
