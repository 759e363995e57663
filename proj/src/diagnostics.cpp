#include "em1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "em1d/green.hpp"

namespace em1d {

double derivative_norm(const ModeField& f, int alpha) {
  require(alpha >= 0, "derivative_norm: alpha must be nonnegative");
  const Grid& g = f.grid;
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (alpha % 2 == 1 && g.is_nyquist(i)) continue;
    const double k = g.wavenumber(i);
    s += std::pow(k * k, alpha) * std::norm(f[i]);
  }
  return std::sqrt(g.length() * s);
}

double sobolev_norm(const ModeField& f, int s) {
  require(s >= 0, "sobolev_norm: order must be nonnegative");
  double sum = 0.0;
  for (int a = 0; a <= s; ++a) sum += std::pow(derivative_norm(f, a), 2);
  return std::sqrt(sum);
}

double sobolev_norm(std::span<const ModeField> fields, int s) {
  double sum = 0.0;
  for (const auto& f : fields) sum += std::pow(sobolev_norm(f, s), 2);
  return std::sqrt(sum);
}

double sup_norm(const ModeField& f) {
  double m = 0.0;
  for (double v : inverse(f)) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

namespace {

double sup_pair(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::hypot(a[i], b[i]));
  return m;
}

double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

EnergyReport energy_report(const PhysState& s, const PressureLaw& law, int N) {
  require(N >= 2, "energy_report: N must be at least 2");
  const Grid& g = s.grid;
  const auto rho = inverse(s.rho);
  const auto n = static_cast<std::size_t>(g.size());
  std::vector<double> w_rho(n), w_u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dens = 1.0 + rho[i];
    require(dens > 0.0, "energy_report: density must be positive");
    w_rho[i] = law.derivative(dens) / dens;
    w_u[i] = dens;
  }

  EnergyReport r;
  for (int a = 0; a <= N; ++a) {
    const auto dr = inverse(spectral_derivative(s.rho, a));
    const auto du1 = inverse(spectral_derivative(s.u1, a));
    const auto du2 = inverse(spectral_derivative(s.u_r[0], a));
    const auto du3 = inverse(spectral_derivative(s.u_r[1], a));
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e += w_rho[i] * dr[i] * dr[i] + w_u[i] * (du1[i] * du1[i] + du2[i] * du2[i] + du3[i] * du3[i]);
    e *= g.dx();
    for (const ModeField* f : {&s.E1, &s.E_r[0], &s.E_r[1], &s.B_r[0], &s.B_r[1]}) e += std::pow(derivative_norm(*f, a), 2);
    r.E_N += e;
    if (a == 0) r.E0 = e;
  }

  for (const ModeField* f : {&s.rho, &s.u1, &s.u_r[0], &s.u_r[1]}) r.D += std::pow(sobolev_norm(*f, N), 2);
  for (const ModeField* f : {&s.E1, &s.E_r[0], &s.E_r[1]}) r.D += std::pow(sobolev_norm(*f, N - 1), 2);
  for (const ModeField* f : {&s.B_r[0], &s.B_r[1]}) r.D += std::pow(sobolev_norm(spectral_derivative(*f, 1), N - 2), 2);

  for (const ModeField* f : {&s.rho, &s.u1, &s.u_r[0], &s.u_r[1], &s.E1, &s.E_r[0], &s.E_r[1], &s.B_r[0], &s.B_r[1]})
    r.L2_squared += std::pow(derivative_norm(*f, 0), 2);

  const auto u1 = inverse(s.u1);
  const auto drho = inverse(spectral_derivative(s.rho, 1)), du1 = inverse(spectral_derivative(s.u1, 1));
  const auto du2 = inverse(spectral_derivative(s.u_r[0], 1)), du3 = inverse(spectral_derivative(s.u_r[1], 1));
  const double cross = sup_abs(u1) * sup_abs(drho) + sup_abs(rho) * sup_abs(du1);
  r.M1 = sup_pair(drho, du1) + cross;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m2 = std::max(m2, std::sqrt(drho[i] * drho[i] + du1[i] * du1[i] + du2[i] * du2[i] + du3[i] * du3[i]));
  r.M2 = m2 + cross;
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(FitMode m) { return m == FitMode::polynomial ? "polynomial" : "exponential"; }

RateFit fit_decay_rate(std::span<const double> times, std::span<const double> values, double t_a, double t_b,
                       FitMode mode) {
  require(times.size() == values.size(), "fit_decay_rate: times and values differ in length");
  require(t_a < t_b, "fit_decay_rate: empty window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a || times[i] > t_b) continue;
    require(values[i] > 0.0, "fit_decay_rate: nonpositive value at t = " + std::to_string(times[i]));
    x.push_back(mode == FitMode::polynomial ? std::log1p(times[i]) : times[i]);
    y.push_back(std::log(values[i]));
  }
  const int n = static_cast<int>(x.size());
  require(n >= kMinFitSamples, "fit_decay_rate: window holds " + std::to_string(n) + " samples, need " +
                                   std::to_string(kMinFitSamples));
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) ssr += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
  f.t_a = t_a;
  f.t_b = t_b;
  f.samples = n;
  f.mode = mode;
  return f;
}

RateFit fit_decay_rate(const TimeSeries& s, const std::string& column, double t_a, double t_b, FitMode mode) {
  return fit_decay_rate(s.times, s.column(column), t_a, t_b, mode);
}

// ---------------------------------------------------------------------------

const char* to_string(EntryClass c) {
  static const char* names[] = {"uu", "uE", "uB", "Eu", "EE", "EB", "Bu", "BE", "BB", "f11", "f12", "f21", "f22"};
  return names[static_cast<int>(c)];
}

EnvelopeReport envelope_ratio_check(LinearSystem sys, std::span<const double> ts, std::span<const double> ks,
                                    const RegimeThresholds& thresholds, double gamma, double ceiling) {
  require(!ts.empty() && !ks.empty(), "envelope_ratio_check: empty sample grid");
  EnvelopeReport rep;
  rep.ceiling = ceiling;
  auto slot = [&](Regime r, EntryClass e) -> EnvelopeStat& {
    for (auto& s : rep.stats)
      if (s.regime == r && s.entry == e) return s;
    rep.stats.push_back(EnvelopeStat{sys, r, e, 0.0, 0});
    return rep.stats.back();
  };
  const double eta = f_regime_boundary(gamma);
  for (double k : ks)
    for (double t : ts) {
      if (sys == LinearSystem::f) {
        const Regime r = std::abs(k) < eta ? Regime::low : Regime::high;
        const Mat2c g = green_f(t, k, gamma).entries;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double env = envelope_f(t, k, gamma, i + 1, j + 1);
            if (env < 1e-280) continue;
            auto& st = slot(r, static_cast<EntryClass>(static_cast<int>(EntryClass::f11) + 2 * i + j));
            st.c_star = std::max(st.c_star, std::abs(g(i, j)) / env);
            ++st.samples;
          }
      } else {
        const Regime r = thresholds.classify(k);
        const Mat6c g = green_e(t, k).entries;
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) {
            const double env = envelope_e(t, k, i + 1, j + 1, thresholds);
            if (env < 1e-280) continue;
            auto& st = slot(r, static_cast<EntryClass>(3 * (i / 2) + j / 2));
            st.c_star = std::max(st.c_star, std::abs(g(i, j)) / env);
            ++st.samples;
          }
      }
    }
  for (const auto& s : rep.stats) rep.c_star = std::max(rep.c_star, s.c_star);
  return rep;
}

double mid_band_decay_rate(std::span<const double> ts, const RegimeThresholds& thresholds, int k_points) {
  require(ts.size() >= 2, "mid_band_decay_rate: need at least two times");
  require(k_points >= 2, "mid_band_decay_rate: need at least two wavenumbers");
  std::vector<double> peak;
  const double a = std::log(thresholds.eps), b = std::log(thresholds.R);
  for (double t : ts) {
    double m = 0.0;
    for (int i = 0; i < k_points; ++i) {
      const double k = std::exp(a + (b - a) * i / (k_points - 1));
      m = std::max(m, green_e(t, k).entries.cwiseAbs().maxCoeff());
    }
    peak.push_back(m);
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mx += ts[i];
    my += std::log(peak[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - mx) * (ts[i] - mx);
    sxy += (ts[i] - mx) * (std::log(peak[i]) - my);
  }
  return -sxy / sxx;
}

// ---------------------------------------------------------------------------

Band lower_envelope_check(std::span<const double> times, std::span<const double> values, double theta, double t_a,
                          double t_b) {
  require(times.size() == values.size(), "lower_envelope_check: times and values differ in length");
  Band b;
  b.theta = theta;
  b.min = INFINITY;
  b.max = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a || times[i] > t_b) continue;
    const double c = std::pow(1.0 + times[i], theta) * values[i];
    b.min = std::min(b.min, c);
    b.max = std::max(b.max, c);
    ++n;
  }
  require(n >= 2, "lower_envelope_check: window holds fewer than two samples");
  return b;
}

// ---------------------------------------------------------------------------

std::vector<double> q_functional(const TimeSeries& s) {
  const auto& rho0 = s.column("rho");
  const auto& rho1 = s.column("d1_rho");
  const auto& u0 = s.column("u1");
  const auto& u1 = s.column("d1_u1");
  const auto& e0 = s.column("E1");
  const auto& e1 = s.column("d1_E1");
  const auto& ur0 = s.column("u_r");
  const auto& ur1 = s.column("d1_u_r");
  const auto& er0 = s.column("E_r");
  const auto& er1 = s.column("d1_E_r");
  const auto& b0 = s.column("B_r");
  const auto& b1 = s.column("d1_B_r");
  const auto& high = s.column("d2H2");
  std::vector<double> q(s.times.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double w = 1.0 + s.times[i];
    double v = std::pow(w, 1.25) * std::hypot(rho0[i], u0[i]) + std::pow(w, 1.75) * std::hypot(rho1[i], u1[i]);
    v += std::pow(w, 1.25) * (e0[i] + e1[i]);
    v += std::pow(w, 0.75) * std::hypot(ur0[i], er0[i]) + std::pow(w, 1.25) * std::hypot(ur1[i], er1[i]);
    v += std::pow(w, 0.25) * b0[i] + std::pow(w, 0.75) * b1[i];
    v += high[i];
    sup = std::max(sup, v);
    q[i] = sup;
  }
  return q;
}

double q_functional(const TimeSeries& s, double t) {
  const auto q = q_functional(s);
  double v = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    if (s.times[i] <= t) {
      v = q[i];
      any = true;
    }
  require(any, "q_functional: no samples at or before t");
  return v;
}

GNResult gn_check(const ModeField& f, int j, int m, int b) {
  require(0 <= b && b <= j && j < m && m <= 4, "gn_check: need 0 <= b <= j < m <= 4");
  GNResult r;
  r.a = static_cast<double>(j - b) / (m - b);
  r.lhs = derivative_norm(f, j);
  r.rhs = std::pow(derivative_norm(f, m), r.a) * std::pow(derivative_norm(f, b), 1.0 - r.a);
  r.C = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

}  // namespace em1d
