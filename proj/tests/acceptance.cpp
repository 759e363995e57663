// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "em1d/diagnostics.hpp"
#include "em1d/green.hpp"
#include "em1d/linsolve.hpp"
#include "em1d/nonlinear.hpp"
#include "em1d/spectrum.hpp"

using namespace em1d;

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <class M>
double max_abs(const M& m) {
  return m.cwiseAbs().maxCoeff();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double state_diff(const PhysState& a, const PhysState& b) {
  double m = 0.0;
  for (int c = 0; c < kComponentCount; ++c) {
    const auto comp = static_cast<Component>(c);
    for (int i = 0; i < a.grid.size(); ++i) m = std::max(m, std::abs(a.modes(comp)[i] - b.modes(comp)[i]));
  }
  return m;
}

double hn_norm(const PhysState& s, int order) {
  double n = 0.0;
  for (int c = 0; c < kComponentCount; ++c) n += std::pow(sobolev_norm(s.modes(static_cast<Component>(c)), order), 2);
  return std::sqrt(n);
}

PhysState small_state(const Grid& g, double delta) {
  const PhysState s = make_state(InitProfile(RunConfig::default_nonlinear_profile()), g);
  return scaled(s, delta / hn_norm(s, 4));
}

// ---------------------------------------------------------------------------

Line oracle_equivalence() {
  Line l;
  const auto t0 = Clock::now();
  const auto ks = logspace(2e-3, 1e3, 200);
  double de = 0.0, df = 0.0;
  for (double t : {0.1, 1.0, 10.0, 100.0})
    for (double k : ks) {
      de = std::max(de, max_abs(green_e(t, k).entries - expm_oracle(t, k).entries));
      df = std::max(df, max_abs(green_f(t, k, 1.0).entries - expm_oracle_f(t, k, 1.0).entries));
    }
  const double rt = seconds_since(t0);
  l.require(de < 1e-9, fmt("e max diff %.3e < 1e-9", de));
  l.require(df < 1e-9, fmt("f max diff %.3e < 1e-9", df));
  l.require(rt < 10.0, fmt("runtime %.2f s < 10 s", rt));
  return l;
}

Line spectral_structure() {
  Line l;
  const auto ks = logspace(1e-3, 1e4, 1000);
  const auto syms = label_spectrum_e(ks);
  double re_half = 0.0, conj_rel = 0.0, conj_abs = 0.0, min_dist = INFINITY, max_re = -INFINITY;
  for (const auto& s : syms) {
    const FSymbol f = eigen_f(s.k, 1.0);
    re_half = std::max({re_half, std::abs(f.lambda_plus.real() + 0.5), std::abs(f.lambda_minus.real() + 0.5)});
    max_re = std::max({max_re, f.lambda_plus.real(), f.lambda_minus.real()});
    for (int j = 1; j <= 3; ++j) {
      const double d = std::abs(s(j + 3) - std::conj(s(j)));
      conj_abs = std::max(conj_abs, d);
      conj_rel = std::max(conj_rel, d / std::max(1.0, std::abs(s(j))));
      for (int m = j + 1; m <= 3; ++m) min_dist = std::min(min_dist, std::abs(s(j) - s(m)));
    }
    for (int j = 1; j <= 6; ++j) max_re = std::max(max_re, s(j).real());
  }
  l.require(re_half <= 1e-12, fmt("max |Re lambda_pm + 1/2| %.2e <= 1e-12", re_half));
  l.require(conj_abs <= 1e-12, fmt("conjugacy %.2e <= 1e-12 (relative %.2e)", conj_abs, conj_rel));
  l.require(min_dist > 1e-8, fmt("min g+ root distance %.3e > 1e-8", min_dist));
  l.require(max_re < 0.0, fmt("max Re lambda %.3e < 0", max_re));
  return l;
}

Line expansion_orders() {
  Line l;
  const auto lo = logspace(1e-3, 1e-1, 21);
  const auto hi = logspace(1e2, 1e4, 21);
  double min_low = INFINITY, max_high = -INFINITY;
  auto fit = [&](const std::function<double(double, Regime)>& r) {
    std::vector<double> rl, rh;
    for (double k : lo) rl.push_back(r(k, Regime::low));
    for (double k : hi) rh.push_back(r(k, Regime::high));
    min_low = std::min(min_low, loglog_slope(lo, rl));
    max_high = std::max(max_high, loglog_slope(hi, rh));
  };
  for (int j = 1; j <= 6; ++j) fit([j](double k, Regime r) { return expansion_residual_e(k, j, r); });
  fit([](double k, Regime r) { return expansion_residual_f(k, 1.0, r); });
  l.require(min_low >= 3.8, fmt("min low-k slope %.3f >= 3.8", min_low));
  l.require(max_high <= -2.8, fmt("max high-k slope %.3f <= -2.8", max_high));
  return l;
}

Line projector_algebra() {
  Line l;
  double idem = 0.0, orth = 0.0, comp = 0.0;
  for (double k : logspace(1e-2, 1e2, 50)) {
    const ProjectorSet ps = projectors_e(k);
    Mat6c sum = Mat6c::Zero();
    for (int j = 0; j < 6; ++j) {
      sum += ps.P[j];
      idem = std::max(idem, max_abs(ps.P[j] * ps.P[j] - ps.P[j]));
      for (int m = 0; m < 6; ++m)
        if (m != j) orth = std::max(orth, max_abs(ps.P[j] * ps.P[m]));
    }
    comp = std::max(comp, max_abs(sum - Mat6c::Identity()));
  }
  l.require(idem < 1e-10, fmt("|P^2 - P| %.2e", idem));
  l.require(orth < 1e-10, fmt("|P_j P_m| %.2e", orth));
  l.require(comp < 1e-10, fmt("|sum P - I| %.2e", comp));
  return l;
}

Line envelope_bounds() {
  Line l;
  const RegimeThresholds thr = measure_thresholds();
  const auto ks = logspace(1e-3, 1e3, 41);
  const std::vector<double> ts{0.0, 1.0, 10.0, 100.0};
  double worst = 0.0;
  int classes = 0;
  bool finite = true;
  for (LinearSystem sys : {LinearSystem::e, LinearSystem::f}) {
    const EnvelopeReport r = envelope_ratio_check(sys, ts, ks, thr, 1.0, 50.0);
    std::set<Regime> regimes;
    for (const auto& st : r.stats) {
      regimes.insert(st.regime);
      finite = finite && std::isfinite(st.c_star);
      worst = std::max(worst, st.c_star);
      ++classes;
    }
    if (sys == LinearSystem::e) l.require(regimes.size() == 3, fmt("e-system regimes covered %.0f of 3", static_cast<double>(regimes.size())));
  }
  l.require(finite && worst <= 50.0, fmt("max C* %.3f <= 50 over %.0f entry-class/regime cells", worst, classes));
  std::vector<double> mts;
  for (int i = 1; i <= 20; ++i) mts.push_back(i);
  const double c = mid_band_decay_rate(mts, thr);
  l.require(c > 0.0, fmt("mid-band c_emp %.4f > 0", c));
  return l;
}

struct LinearRates {
  std::vector<double> ts;
  TimeSeries series;
  double f_rate = 0.0;
  double seconds = 0.0;
};

LinearRates linear_rates() {
  const auto t0 = Clock::now();
  ProfileSpec p;
  p.weights = {0, 1, 1, 1, 1, 1, 1, 1, 0};
  const InitProfile prof(p);
  LinearRates r;
  r.ts = logspace(1e2, 1e5, 40);
  r.series = sample_series(prof, r.ts,
                           {{Field::B_r, 0}, {Field::u_r, 0}, {Field::E_r, 0}, {Field::B_r, 1}, {Field::u_r, 1}, {Field::E_r, 1}});
  std::vector<double> fts;
  for (int i = 0; i < 24; ++i) fts.push_back(5.0 + 45.0 * i / 23.0);
  const TimeSeries fs = sample_series(prof, fts, {{Field::u1, 0}, {Field::E1, 0}});
  std::vector<double> fn;
  for (std::size_t i = 0; i < fts.size(); ++i) fn.push_back(std::hypot(fs.column("u1")[i], fs.column("E1")[i]));
  r.f_rate = fit_decay_rate(fts, fn, 5.0, 50.0, FitMode::exponential).slope;
  r.seconds = seconds_since(t0);
  return r;
}

Line decay_rates(const LinearRates& r) {
  Line l;
  const std::pair<const char*, double> targets[] = {{"B_r", -0.25},   {"u_r", -0.75},   {"E_r", -0.75},
                                                    {"d1_B_r", -0.75}, {"d1_u_r", -1.25}, {"d1_E_r", -1.25}};
  for (const auto& [name, target] : targets) {
    const RateFit f = fit_decay_rate(r.series, name, 1e2, 1e5);
    const double tol = std::string(name) == "B_r" ? 0.03 : 0.05;
    l.require(f.samples >= kMinFitSamples && std::abs(f.slope - target) <= tol,
              std::string(name) + fmt(" %.4f", f.slope) + fmt(" (target %.2f +- %.2f)", target, tol));
  }
  l.require(std::abs(r.f_rate + 0.5) <= 0.02, fmt("f rate %.4f (target -0.50 +- 0.02)", r.f_rate));
  l.require(r.seconds < 120.0, fmt("runtime %.2f s < 120 s", r.seconds));
  return l;
}

Line sharpness(const LinearRates& r) {
  Line l;
  const std::pair<const char*, double> thetas[] = {{"B_r", 0.25},   {"u_r", 0.75},   {"E_r", 0.75},
                                                   {"d1_B_r", 0.75}, {"d1_u_r", 1.25}, {"d1_E_r", 1.25}};
  double worst = 0.0;
  for (const auto& [name, theta] : thetas)
    worst = std::max(worst, lower_envelope_check(r.ts, r.series.column(name), theta, 1e2, 1e5).ratio());
  l.require(worst < 3.0, fmt("max band ratio %.3f < 3", worst));
  const double control = lower_envelope_check(r.ts, r.series.column("B_r"), 0.5, 1e2, 1e5).ratio();
  const double control_u = lower_envelope_check(r.ts, r.series.column("u_r"), 0.5, 1e2, 1e5).ratio();
  l.require(control >= 3.0, fmt("control B_r theta=1/2 ratio %.3f >= 3", control));
  l.require(control_u >= 3.0, fmt("control u_r theta=1/2 ratio %.3f >= 3", control_u));
  return l;
}

Line nonlinear_run() {
  Line l;
  const auto t0 = Clock::now();
  RunConfig cfg;
  cfg.L = 200.0 * kPi;
  cfg.N = 1024;
  cfg.t_end = 200.0;
  cfg.dt = 0.05;
  cfg.delta0 = 1e-3;
  const RunResult res = run(cfg);
  const auto& en = res.series.column("E_N");
  double ratio = 0.0;
  for (double e : en) ratio = std::max(ratio, e / en.front());
  const RateFit fb = fit_decay_rate(res.series, "B_r", 20.0, 200.0);
  const RateFit fu = fit_decay_rate(res.series, "u_r", 20.0, 200.0);
  l.require(res.max_constraint < 1e-8, fmt("constraint %.2e < 1e-8", res.max_constraint));
  l.require(ratio <= 1.05, fmt("max E_N/E_N(0) %.6f <= 1.05", ratio));
  l.require(std::abs(fb.slope + 0.25) <= 0.1, fmt("B_r slope %.4f (target -0.25 +- 0.1)", fb.slope));
  l.require(std::abs(fu.slope + 0.75) <= 0.15, fmt("u_r slope %.4f (target -0.75 +- 0.15)", fu.slope));

  // dt halving from the same initial state
  const Grid g(cfg.L, cfg.N);
  const PhysState s0 = small_state(g, cfg.delta0);
  std::vector<PhysState> fin;
  for (double dt : {0.2, 0.1, 0.05}) {
    PhysState s = s0;
    const Stepper st(g, dt, cfg.law);
    for (int i = 0; i < static_cast<int>(std::lround(10.0 / dt)); ++i) s = st.step(s);
    fin.push_back(s);
  }
  const double order = std::log2(state_diff(fin[0], fin[1]) / state_diff(fin[1], fin[2]));
  l.require(std::abs(order - 2.0) <= 0.1, fmt("dt-halving order %.3f (2 +- 0.1)", order));
  const double rt = seconds_since(t0);
  l.require(rt < 300.0, fmt("runtime %.1f s < 300 s", rt));
  return l;
}

Line linearization() {
  Line l;
  const Grid g(200.0 * kPi, 1024);
  const PhysState base = small_state(g, 1.0);
  const double dt = 0.05;
  const Stepper st(g, dt, PressureLaw{});
  std::vector<double> amps, errs;
  for (double a : {1e-8, 2e-8, 4e-8, 8e-8, 1.6e-7}) {
    const PhysState s = scaled(base, a);
    const PhysState nl = st.step(s);
    const LinearState lin0 = to_linear(s);
    PhysState lin = from_linear(LinearState{propagate_f(lin0.f, dt, 1.0), propagate_e(lin0.e, dt), lin0.rho});
    for (int i = 0; i < g.size(); ++i) lin.rho[i] = -I * g.wavenumber(i) * lin.E1[i];
    amps.push_back(a);
    errs.push_back(state_diff(nl, lin));
  }
  const double p = loglog_slope(amps, errs);
  l.require(std::abs(p - 2.0) <= 0.1, fmt("exponent %.4f (2 +- 0.1)", p) + fmt(", error %.2e at amplitude %.0e", errs.front(), amps.front()));
  return l;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<Line()>& f) {
    Line l;
    try {
      l = f();
    } catch (const std::exception& e) {
      l.pass = false;
      l.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", l.pass ? "PASS" : "FAIL", n, name, l.detail.c_str());
    std::fflush(stdout);
    if (!l.pass) ++failures;
  };

  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "spectral structure", spectral_structure);
  report(3, "expansion orders", expansion_orders);
  report(4, "projector algebra", projector_algebra);
  report(5, "envelope bounds", envelope_bounds);
  LinearRates rates;
  bool have_rates = true;
  try {
    rates = linear_rates();
  } catch (const std::exception& e) {
    have_rates = false;
    std::printf("linear rate sampling failed: %s\n", e.what());
  }
  report(6, "linear decay rates", [&] {
    if (!have_rates) throw NumericalError("no samples");
    return decay_rates(rates);
  });
  report(7, "sharpness bands", [&] {
    if (!have_rates) throw NumericalError("no samples");
    return sharpness(rates);
  });
  report(8, "nonlinear small-data run", nonlinear_run);
  report(9, "linearization consistency", linearization);
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
