#include "em1d/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "em1d/diagnostics.hpp"
#include "em1d/green.hpp"

namespace em1d {

PressureLaw::PressureLaw(double K_, double a_) : K(K_), a(a_) {
  require(K > 0.0, "pressure law: K must be positive");
  require(a > 0.0, "pressure law: exponent a must be positive");
}

PhysState::PhysState(const Grid& g)
    : grid(g), rho(g), u1(g), E1(g), u_r{ModeField(g), ModeField(g)}, E_r{ModeField(g), ModeField(g)},
      B_r{ModeField(g), ModeField(g)} {}

ModeField& PhysState::modes(Component c) {
  switch (c) {
    case Component::rho: return rho;
    case Component::u1: return u1;
    case Component::E1: return E1;
    case Component::u2: return u_r[0];
    case Component::u3: return u_r[1];
    case Component::E2: return E_r[0];
    case Component::E3: return E_r[1];
    case Component::B2: return B_r[0];
    case Component::B3: return B_r[1];
  }
  throw InvalidArgument("unknown component");
}

const ModeField& PhysState::modes(Component c) const { return const_cast<PhysState*>(this)->modes(c); }

std::vector<double> PhysState::field(Component c) const { return inverse(modes(c)); }

namespace {

constexpr Component kAll[kComponentCount] = {Component::rho, Component::u1, Component::E1,
                                             Component::u2,  Component::u3, Component::E2,
                                             Component::E3,  Component::B2, Component::B3};

template <class F>
void pointwise(std::size_t n, Exec exec, F&& body) {
  const auto count = static_cast<long long>(n);
  if (exec == Exec::serial) {
    for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

bool finite(const ModeField& f) {
  return std::all_of(f.coeffs.begin(), f.coeffs.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

}  // namespace

PhysState from_linear(const LinearState& s) {
  PhysState p(s.f.grid);
  for (int i = 0; i < p.grid.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    p.u1[i] = s.f.y[si](0);
    p.E1[i] = s.f.y[si](1);
    p.rho[i] = s.rho[i];
    for (int c = 0; c < 2; ++c) {
      p.u_r[c][i] = s.e.y[si](c);
      p.E_r[c][i] = s.e.y[si](2 + c);
      p.B_r[c][i] = s.e.y[si](4 + c);
    }
  }
  return p;
}

LinearState to_linear(const PhysState& p) {
  const auto n = static_cast<std::size_t>(p.grid.size());
  LinearState s{FState{p.grid, std::vector<Vec2c>(n)}, EState{p.grid, std::vector<Vec6c>(n)}, p.rho};
  for (std::size_t i = 0; i < n; ++i) {
    const int si = static_cast<int>(i);
    s.f.y[i] << p.u1[si], p.E1[si];
    s.e.y[i] << p.u_r[0][si], p.u_r[1][si], p.E_r[0][si], p.E_r[1][si], p.B_r[0][si], p.B_r[1][si];
  }
  return s;
}

PhysState make_state(const InitProfile& profile, const Grid& grid) {
  PhysState p = from_linear(grid_state(profile, grid));
  for (Component c : kAll) p.modes(c) = dealias(p.modes(c));
  return p;
}

PhysState scaled(const PhysState& s, double c) {
  PhysState out = s;
  for (Component comp : kAll)
    for (auto& v : out.modes(comp).coeffs) v *= c;
  return out;
}

double constraint_residual(const PhysState& s) {
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i)
    worst = std::max(worst, std::abs(I * s.grid.wavenumber(i) * s.E1[i] + s.rho[i]));
  return worst;
}

NonlinearTerms nonlinear_terms(const PhysState& s, const PressureLaw& law, Exec exec) {
  const auto n = static_cast<std::size_t>(s.grid.size());
  const auto rho = inverse(s.rho), u1 = inverse(s.u1);
  const auto drho = inverse(spectral_derivative(s.rho, 1)), du1 = inverse(spectral_derivative(s.u1, 1));
  const std::array<std::vector<double>, 2> ur{inverse(s.u_r[0]), inverse(s.u_r[1])};
  const std::array<std::vector<double>, 2> dur{inverse(spectral_derivative(s.u_r[0], 1)),
                                               inverse(spectral_derivative(s.u_r[1], 1))};
  const std::array<std::vector<double>, 2> br{inverse(s.B_r[0]), inverse(s.B_r[1])};

  const double nmin = 1.0 + *std::min_element(rho.begin(), rho.end());
  if (!(nmin >= kDensityFloor))
    throw NumericalError("density n = " + std::to_string(nmin) + " below the floor " + std::to_string(kDensityFloor));

  NonlinearTerms h{std::vector<double>(n), std::vector<double>(n), {std::vector<double>(n), std::vector<double>(n)},
                   {std::vector<double>(n), std::vector<double>(n)}};
  pointwise(n, exec, [&](std::size_t i) {
    // O1 B = (-B3, B2)
    const double ob2 = -br[1][i], ob3 = br[0][i];
    h.h1[i] = -u1[i] * du1[i] - law.pressure_coefficient(1.0 + rho[i]) * drho[i] + ur[0][i] * ob2 + ur[1][i] * ob3;
    h.h2[i] = rho[i] * u1[i];
    h.h3[0][i] = -u1[i] * dur[0][i] - u1[i] * ob2;
    h.h3[1][i] = -u1[i] * dur[1][i] - u1[i] * ob3;
    h.h4[0][i] = rho[i] * ur[0][i];
    h.h4[1][i] = rho[i] * ur[1][i];
  });
  return h;
}

SourceModes source_modes(const PhysState& s, const PressureLaw& law, Exec exec) {
  const NonlinearTerms h = nonlinear_terms(s, law, exec);
  const Grid& g = s.grid;
  const ModeField h1 = dealias(forward(g, h.h1)), h2 = dealias(forward(g, h.h2));
  const ModeField h3a = dealias(forward(g, h.h3[0])), h3b = dealias(forward(g, h.h3[1]));
  const ModeField h4a = dealias(forward(g, h.h4[0])), h4b = dealias(forward(g, h.h4[1]));
  const auto n = static_cast<std::size_t>(g.size());
  SourceModes m{std::vector<Vec2c>(n), std::vector<Vec6c>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int si = static_cast<int>(i);
    m.f[i] << h1[si], h2[si];
    m.e[i] << h3a[si], h3b[si], h4a[si], h4b[si], 0.0, 0.0;
  }
  return m;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(const Grid& grid, double dt, const PressureLaw& law, Exec exec)
    : grid_(grid), dt_(dt), law_(law), exec_(exec) {
  require(dt > 0.0 && std::isfinite(dt), "step: dt must be positive");
  gf_full_ = green_f_table(grid, dt, law.gamma(), exec);
  gf_half_ = green_f_table(grid, 0.5 * dt, law.gamma(), exec);
  ge_full_ = green_e_table(grid, dt, exec);
  ge_half_ = green_e_table(grid, 0.5 * dt, exec);
}

PhysState Stepper::step(const PhysState& s) const {
  require(s.grid == grid_, "step: state grid differs from the stepper grid");
  const auto n = static_cast<std::size_t>(grid_.size());
  const LinearState y = to_linear(s);

  SourceModes n0;
  try {
    n0 = source_modes(s, law_, exec_);
  } catch (const NumericalError& e) {
    throw StepFailure(e.what(), s);
  }

  // predictor at the half step; rho follows from Gauss's law
  LinearState half = y;
  for (std::size_t i = 0; i < n; ++i) {
    half.f.y[i] = gf_half_[i] * (y.f.y[i] + 0.5 * dt_ * n0.f[i]);
    half.e.y[i] = ge_half_[i] * (y.e.y[i] + 0.5 * dt_ * n0.e[i]);
    half.rho[static_cast<int>(i)] = -I * grid_.wavenumber(static_cast<int>(i)) * half.f.y[i](1);
  }
  PhysState mid = from_linear(half);
  SourceModes n1;
  try {
    n1 = source_modes(mid, law_, exec_);
  } catch (const NumericalError& e) {
    throw StepFailure(e.what(), s);
  }

  LinearState next = y;
  for (std::size_t i = 0; i < n; ++i) {
    next.f.y[i] = gf_full_[i] * y.f.y[i] + dt_ * (gf_half_[i] * n1.f[i]);
    next.e.y[i] = ge_full_[i] * y.e.y[i] + dt_ * (ge_half_[i] * n1.e[i]);
  }

  double drift = 0.0;
  const int nyq = grid_.size() / 2;
  for (int i = 0; i < grid_.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    const double k = grid_.wavenumber(i);
    next.rho[i] = y.rho[i] - I * k * (next.f.y[si](1) - y.f.y[si](1));
    drift = std::max(drift, std::abs(I * k * next.f.y[si](1) + next.rho[i]));
    if (k != 0.0) next.f.y[si](1) = I * next.rho[i] / k;
  }
  next.rho[0] = 0.0;
  next.rho[nyq] = 0.0;
  next.f.y[static_cast<std::size_t>(nyq)].setZero();
  next.e.y[static_cast<std::size_t>(nyq)].setZero();
  last_drift_ = drift;

  PhysState out = from_linear(next);
  out.t = s.t + dt_;
  for (Component c : kAll)
    if (!finite(out.modes(c))) throw StepFailure("non-finite value after step at t = " + std::to_string(out.t), s);
  return out;
}

PhysState step(const PhysState& s, double dt, const PressureLaw& law, Exec exec) {
  return Stepper(s.grid, dt, law, exec).step(s);
}

double cfl_limit(const PhysState& s) {
  const auto u = inverse(s.u1);
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m > 0.0 ? 0.5 * s.grid.dx() / m : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

ProfileSpec RunConfig::default_nonlinear_profile() {
  ProfileSpec p;
  p.weights = {0, 1, 1, 1, 1, 1, 1, 1, 1};
  return p;
}

namespace {

double all_fields_norm(const PhysState& s, int order) {
  double sum = 0.0;
  for (Component c : kAll) sum += std::pow(sobolev_norm(s.modes(c), order), 2);
  return std::sqrt(sum);
}

struct FieldGroup {
  const char* name;
  std::vector<Component> comps;
};

const std::vector<FieldGroup>& field_groups() {
  static const std::vector<FieldGroup> g{{"rho", {Component::rho}},
                                         {"u1", {Component::u1}},
                                         {"E1", {Component::E1}},
                                         {"u_r", {Component::u2, Component::u3}},
                                         {"E_r", {Component::E2, Component::E3}},
                                         {"B_r", {Component::B2, Component::B3}}};
  return g;
}

void record(TimeSeries& ts, std::vector<std::vector<double>>& cols, const PhysState& s, const EnergyReport& e,
            double int_D, double constraint, double drift) {
  std::size_t c = 0;
  auto push = [&](double v) { cols[c++].push_back(v); };
  for (const auto& g : field_groups()) {
    for (int a = 0; a <= 4; ++a) {
      double sq = 0.0;
      for (Component comp : g.comps) sq += std::pow(derivative_norm(s.modes(comp), a), 2);
      push(std::sqrt(sq));
    }
    double sup = 0.0;
    if (g.comps.size() == 1) {
      sup = sup_norm(s.modes(g.comps[0]));
    } else {
      const auto a = s.field(g.comps[0]), b = s.field(g.comps[1]);
      for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::hypot(a[i], b[i]));
    }
    push(sup);
  }
  double d2 = 0.0;
  for (Component comp : {Component::rho, Component::u1, Component::u2, Component::u3, Component::B2, Component::B3})
    for (int a = 2; a <= 4; ++a) d2 += std::pow(derivative_norm(s.modes(comp), a), 2);
  push(std::sqrt(d2));
  push(e.E_N);
  push(e.D);
  push(int_D);
  push(e.M1);
  push(e.M2);
  push(e.equivalence_ratio());
  push(constraint);
  push(drift);
  ts.times.push_back(s.t);
}

std::vector<std::string> column_names() {
  std::vector<std::string> names;
  for (const auto& g : field_groups()) {
    names.emplace_back(g.name);
    for (int a = 1; a <= 4; ++a) names.push_back("d" + std::to_string(a) + "_" + g.name);
    names.push_back(std::string("sup_") + g.name);
  }
  for (const char* n : {"d2H2", "E_N", "D", "int_D", "M1", "M2", "equivalence", "constraint", "drift"})
    names.emplace_back(n);
  return names;
}

// D only needs coefficients; used for the per-step trapezoid of int D.
double dissipation(const PhysState& s, int N) {
  double d = 0.0;
  for (Component c : {Component::rho, Component::u1, Component::u2, Component::u3})
    d += std::pow(sobolev_norm(s.modes(c), N), 2);
  for (Component c : {Component::E1, Component::E2, Component::E3}) d += std::pow(sobolev_norm(s.modes(c), N - 1), 2);
  for (Component c : {Component::B2, Component::B3})
    d += std::pow(sobolev_norm(spectral_derivative(s.modes(c), 1), std::max(0, N - 2)), 2);
  return d;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  require(cfg.L > 0.0, "run: L must be positive");
  require(cfg.N >= 8 && cfg.N % 2 == 0, "run: N must be even and at least 8");
  const Grid grid(cfg.L, cfg.N);
  PhysState s0 = make_state(InitProfile(cfg.profile), grid);
  if (cfg.delta0 > 0.0) {
    const double norm = all_fields_norm(s0, cfg.energy_order);
    require(norm > 0.0, "run: initial data vanish");
    s0 = scaled(s0, cfg.delta0 / norm);
  }
  return run(cfg, std::move(s0));
}

RunResult run(const RunConfig& cfg, PhysState s) {
  require(cfg.t_end > 0.0, "run: t_end must be positive");
  require(cfg.sample_every > 0.0, "run: sample_every must be positive");
  require(cfg.dt > 0.0, "run: dt must be positive");
  require(cfg.energy_order >= 2, "run: energy order must be at least 2");
  const double n0 = all_fields_norm(s, cfg.energy_order);
  require(n0 <= cfg.delta_max, "run: initial H^" + std::to_string(cfg.energy_order) + " norm " + std::to_string(n0) +
                                   " exceeds the small-data bound " + std::to_string(cfg.delta_max));

  const double samples_f = cfg.t_end / cfg.sample_every;
  const auto samples = static_cast<long>(std::llround(samples_f));
  require(samples >= 1 && std::abs(samples_f - samples) < 1e-9 * std::max(1.0, samples_f),
          "run: t_end must be a multiple of sample_every");

  int per_sample = static_cast<int>(std::ceil(cfg.sample_every / std::min(cfg.dt, cfl_limit(s)) - 1e-12));
  per_sample = std::max(per_sample, 1);
  auto stepper = std::make_unique<Stepper>(s.grid, cfg.sample_every / per_sample, cfg.law, cfg.exec);

  RunResult res;
  res.series.evaluator = "nonlinear";
  const auto names = column_names();
  std::vector<std::vector<double>> cols(names.size());
  const double t0 = s.t;

  double int_D = 0.0;
  double D_prev = dissipation(s, cfg.energy_order);
  res.max_constraint = constraint_residual(s);
  record(res.series, cols, s, energy_report(s, cfg.law, cfg.energy_order), 0.0, res.max_constraint, 0.0);
  if (cfg.snapshot_every > 0) res.snapshots.push_back(s);

  for (long j = 1; j <= samples; ++j) {
    if (stepper->dt() > cfl_limit(s)) {
      per_sample *= 2;
      stepper = std::make_unique<Stepper>(s.grid, cfg.sample_every / per_sample, cfg.law, cfg.exec);
    }
    double drift = 0.0;
    for (int m = 0; m < per_sample; ++m) {
      PhysState next = stepper->step(s);
      drift = std::max(drift, stepper->last_drift());
      const double D = dissipation(next, cfg.energy_order);
      int_D += 0.5 * stepper->dt() * (D + D_prev);
      D_prev = D;
      s = std::move(next);
      ++res.steps;
    }
    // land exactly on the sample time
    s.t = t0 + j * cfg.sample_every;
    const double growth = all_fields_norm(s, cfg.energy_order);
    if (!(growth <= cfg.growth_limit * n0))
      throw StepFailure("norm growth beyond the safeguard at t = " + std::to_string(s.t), s);
    const double cr = constraint_residual(s);
    res.max_constraint = std::max(res.max_constraint, cr);
    res.max_drift = std::max(res.max_drift, drift);
    record(res.series, cols, s, energy_report(s, cfg.law, cfg.energy_order), int_D, cr, drift);
    if (cfg.snapshot_every > 0 && j % cfg.snapshot_every == 0) res.snapshots.push_back(s);
  }
  res.dt = stepper->dt();
  for (std::size_t c = 0; c < names.size(); ++c) res.series.columns.emplace_back(names[c], std::move(cols[c]));
  res.series.add("Q", q_functional(res.series));
  return res;
}

}  // namespace em1d
