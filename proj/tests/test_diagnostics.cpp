#include <doctest.h>

#include <cmath>

#include "em1d/diagnostics.hpp"

using namespace em1d;

namespace {

ModeField sampled(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(i)] = f(g.x(i));
  return forward(g, v);
}

}  // namespace

TEST_CASE("sobolev norms") {
  const Grid g(2.0 * kPi, 64);
  const ModeField c = sampled(g, [](double) { return 3.0; });
  CHECK(sobolev_norm(c, 0) == doctest::Approx(3.0 * std::sqrt(2.0 * kPi)).epsilon(1e-14));
  CHECK(sobolev_norm(c, 3) == doctest::Approx(3.0 * std::sqrt(2.0 * kPi)).epsilon(1e-14));
  const ModeField s = sampled(g, [](double x) { return std::sin(x); });
  CHECK(sobolev_norm(s, 1) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
  CHECK(derivative_norm(s, 0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  const ModeField s3 = sampled(g, [](double x) { return std::sin(3 * x); });
  CHECK(derivative_norm(s3, 2) == doctest::Approx(9.0 * std::sqrt(kPi)).epsilon(1e-13));
  CHECK(sup_norm(s3) == doctest::Approx(1.0).epsilon(1e-3));
  const std::array<ModeField, 2> pair{s, s3};
  CHECK(sobolev_norm(pair, 0) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("energy report") {
  const Grid g(2.0 * kPi, 64);
  PhysState s(g);
  s.E_r[0] = sampled(g, [](double x) { return std::cos(x); });
  s.B_r[1] = sampled(g, [](double x) { return 0.5; });
  const EnergyReport r = energy_report(s, PressureLaw{}, 4);
  CHECK(r.M1 == 0.0);
  CHECK(r.M2 == 0.0);
  CHECK(r.E0 == doctest::Approx(kPi + 0.25 * 2.0 * kPi));
  CHECK(r.E_N == doctest::Approx(5.0 * kPi + 0.5 * kPi));
  CHECK(r.D == doctest::Approx(4.0 * kPi));  // ||E_r||^2_{H^3}; the constant B has no derivative
  CHECK(r.equivalence_ratio() == doctest::Approx(1.0));

  PhysState w(g);
  w.rho = sampled(g, [](double x) { return 0.1 * std::sin(x); });
  w.u1 = sampled(g, [](double x) { return 0.2 * std::cos(x); });
  w.E1 = sampled(g, [](double x) { return 0.1 * std::cos(x); });
  const EnergyReport rw = energy_report(w, PressureLaw{}, 2);
  CHECK(rw.equivalence_ratio() >= 0.5);
  CHECK(rw.equivalence_ratio() <= 2.0);
  // ||d(rho,u1)||_inf = max sqrt(0.01 cos^2 + 0.04 sin^2) = 0.2
  CHECK(rw.M1 == doctest::Approx(0.2 + 0.2 * 0.1 + 0.1 * 0.2).epsilon(1e-3));
}

TEST_CASE("rate fits recover synthetic exponents") {
  std::vector<double> t, p, e;
  for (int i = 0; i < 40; ++i) {
    t.push_back(std::pow(10.0, 2.0 + 3.0 * i / 39.0));
    p.push_back(3.0 * std::pow(1.0 + t.back(), -0.75));
    e.push_back(2.0 * std::exp(-0.5 * t.back() / 1e3));
  }
  const RateFit fp = fit_decay_rate(t, p, 1e2, 1e5);
  CHECK(std::abs(fp.slope + 0.75) < 1e-6);
  CHECK(std::abs(fp.intercept - std::log(3.0)) < 1e-6);
  CHECK(fp.samples == 40);
  CHECK(fp.stderr_slope < 1e-10);
  const RateFit fe = fit_decay_rate(t, e, 1e2, 1e5, FitMode::exponential);
  CHECK(std::abs(fe.slope * 1e3 + 0.5) < 1e-6);

  CHECK_THROWS_AS(fit_decay_rate(t, p, 1e2, 2e2), InvalidArgument);
  auto bad = p;
  bad[5] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, bad, 1e2, 1e5), InvalidArgument);
}

TEST_CASE("sharpness bands") {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(std::pow(10.0, 2.0 + 0.15 * i));
    v.push_back(std::pow(1.0 + t.back(), -0.25));
  }
  CHECK(lower_envelope_check(t, v, 0.25, 1e2, 1e5).ratio() == doctest::Approx(1.0));
  CHECK(lower_envelope_check(t, v, 0.5, 1e2, 1e5).ratio() > 3.0);

  const InitProfile p(ProfileSpec{});
  const auto ts = log_times(1e2, 1e5, 10);
  const TimeSeries s = sample_series(p, ts, {{Field::B_r, 0}});
  CHECK(lower_envelope_check(ts, s.column("B_r"), 0.25, 1e2, 1e5).ratio() < 3.0);
  CHECK(lower_envelope_check(ts, s.column("B_r"), 0.5, 1e2, 1e5).ratio() > 3.0);
}

TEST_CASE("envelope ratios and mid-band decay") {
  const RegimeThresholds thr = measure_thresholds();
  std::vector<double> ks;
  for (int i = 0; i <= 40; ++i) ks.push_back(std::pow(10.0, -3.0 + 6.0 * i / 40.0));
  const std::vector<double> ts{0.0, 1.0, 10.0, 100.0};
  const EnvelopeReport re = envelope_ratio_check(LinearSystem::e, ts, ks, thr);
  CHECK(std::isfinite(re.c_star));
  CHECK(re.within_ceiling());
  bool regimes[3] = {false, false, false};
  for (const auto& st : re.stats) regimes[static_cast<int>(st.regime)] = true;
  CHECK((regimes[0] && regimes[1] && regimes[2]));
  const EnvelopeReport rf = envelope_ratio_check(LinearSystem::f, ts, ks, thr);
  CHECK(rf.within_ceiling());
  CHECK(rf.stats.size() == 8);
  const EnvelopeReport r0 = envelope_ratio_check(LinearSystem::f, std::vector<double>{0.0}, ks, thr);
  CHECK(std::isfinite(r0.c_star));

  const double c = mid_band_decay_rate(std::vector<double>{100.0, 200.0, 400.0, 800.0}, thr);
  CHECK(c > 0.0);
}

TEST_CASE("Q functional") {
  TimeSeries s;
  s.times = {0.0, 1.0, 2.0};
  for (const char* f : {"rho", "u1", "E1", "u_r", "E_r", "B_r"}) {
    s.add(f, {0.0, 0.0, 0.0});
    s.add(std::string("d1_") + f, {0.0, 0.0, 0.0});
  }
  s.add("d2H2", {0.0, 0.0, 0.0});
  CHECK(q_functional(s, 2.0) == 0.0);
  s.add("B_r", {1.0, 0.5, 0.4});
  const auto q = q_functional(s);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(1.0));
  CHECK(q[2] == doctest::Approx(1.0));
  s.add("d2H2", {0.0, 0.0, 3.0});
  CHECK(q_functional(s, 2.0) == doctest::Approx(std::pow(3.0, 0.25) * 0.4 + 3.0));
  CHECK_THROWS_AS(q_functional(s, -1.0), InvalidArgument);
}

TEST_CASE("Gagliardo-Nirenberg check") {
  const Grid g(2.0 * kPi, 64);
  const ModeField m = sampled(g, [](double x) { return std::sin(4 * x); });
  const GNResult r = gn_check(m, 2, 4);
  CHECK(r.a == doctest::Approx(0.5));
  CHECK(r.C == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gn_check(ModeField(g), 1, 3).C == 0.0);

  const Grid big(200.0 * kPi, 1024);
  const ModeField gauss = sampled(big, [&](double x) { return std::exp(-std::pow(x - 100.0 * kPi, 2) / 8.0); });
  const GNResult rg = gn_check(gauss, 2, 4, 1);
  CHECK(rg.a == doctest::Approx(1.0 / 3.0));
  CHECK(std::isfinite(rg.C));
  CHECK(rg.C <= 1.0 + 1e-12);  // Cauchy-Schwarz in Fourier space gives C <= 1 for the L2 chain
  CHECK_THROWS_AS(gn_check(m, 3, 2), InvalidArgument);
}
