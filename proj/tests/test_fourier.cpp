#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "em1d/fourier.hpp"

using namespace em1d;

namespace {

std::vector<double> sample(const Grid& g, auto f) {
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(i)] = f(g.x(i));
  return v;
}

// Real band-limited field with random coefficients on |j| <= jmax.
std::vector<double> random_band_limited(const Grid& g, int jmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(jmax + 1)), b(static_cast<std::size_t>(jmax + 1));
  for (int j = 0; j <= jmax; ++j) {
    a[static_cast<std::size_t>(j)] = nd(rng);
    b[static_cast<std::size_t>(j)] = j == 0 ? 0.0 : nd(rng);
  }
  return sample(g, [&](double x) {
    double s = 0.0;
    for (int j = 0; j <= jmax; ++j) {
      const double kx = g.dk() * j * x;
      s += a[static_cast<std::size_t>(j)] * std::cos(kx) + b[static_cast<std::size_t>(j)] * std::sin(kx);
    }
    return s;
  });
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("make_grid wavenumbers") {
  const Grid g = make_grid(2.0 * kPi, 8);
  const auto k = g.wavenumbers();
  const std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
  for (int i = 0; i < 8; ++i) CHECK(k[static_cast<std::size_t>(i)] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-15));

  const Grid h = make_grid(4.0 * kPi, 8);
  CHECK(h.dk() == doctest::Approx(0.5));
  CHECK(h.wavenumber(h.slot_of(-4)) == doctest::Approx(-2.0));
  CHECK(h.wavenumber(h.slot_of(3)) == doctest::Approx(1.5));

  CHECK_THROWS_AS(make_grid(2.0 * kPi, 7), InvalidArgument);
  CHECK_THROWS_AS(make_grid(2.0 * kPi, 6), InvalidArgument);
  CHECK_THROWS_AS(make_grid(0.0, 8), InvalidArgument);
  CHECK_THROWS_AS(make_grid(-1.0, 8), InvalidArgument);
}

TEST_CASE("wavenumbers are symmetric except the Nyquist slot") {
  const Grid g = make_grid(37.0, 64);
  for (int i = 0; i < g.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    const int partner = g.slot_of(-g.mode_index(i));
    CHECK(g.wavenumber(partner) == -g.wavenumber(i));
  }
}

TEST_CASE("forward of cos concentrates at k = +-1") {
  const Grid g = make_grid(2.0 * kPi, 64);
  const auto m = forward(g, sample(g, [](double x) { return std::cos(x); }));
  for (int i = 0; i < g.size(); ++i) {
    const int j = g.mode_index(i);
    if (std::abs(j) == 1)
      CHECK(std::abs(m[i] - 0.5) < 1e-14);
    else
      CHECK(std::abs(m[i]) < 1e-12);
  }
}

TEST_CASE("round trip and Parseval") {
  const Grid g = make_grid(13.0, 128);
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto f = random_band_limited(g, 40, seed);
    const auto m = forward(g, f);
    CHECK(max_abs_diff(inverse(m), f) < 1e-12);

    double direct = 0.0;
    for (double v : f) direct += v * v;
    direct *= g.dx();
    CHECK(std::abs(parseval_norm_squared(m) - direct) <= 1e-12 * direct);
    CHECK(hermitian_defect(m) < 1e-13);
  }
  CHECK_THROWS_AS(forward(g, std::vector<double>(10)), InvalidArgument);
}

TEST_CASE("spectral derivative") {
  const Grid g = make_grid(2.0 * kPi, 64);
  const auto m = forward(g, sample(g, [](double x) { return std::sin(x); }));
  const auto d = inverse(spectral_derivative(m, 1));
  CHECK(max_abs_diff(d, sample(g, [](double x) { return std::cos(x); })) < 1e-12);

  const auto same = spectral_derivative(m, 0);
  for (int i = 0; i < g.size(); ++i) CHECK(same[i] == m[i]);

  ModeField single(g);
  single[g.slot_of(2)] = 1.0;
  const auto d2 = spectral_derivative(single, 2);
  CHECK(d2[g.slot_of(2)] == Complex(-4.0, 0.0));

  ModeField nyq(g);
  nyq[g.size() / 2] = 1.0;
  CHECK(spectral_derivative(nyq, 1)[g.size() / 2] == 0.0);
  CHECK(spectral_derivative(nyq, 2)[g.size() / 2] != 0.0);

  CHECK_THROWS_AS(spectral_derivative(m, -1), InvalidArgument);
}

TEST_CASE("dealias keeps the retained band") {
  const Grid g = make_grid(2.0 * kPi, 48);
  const auto f = random_band_limited(g, 16, 7);
  const auto m = forward(g, f);
  const auto d = dealias(m);
  for (int i = 0; i < g.size(); ++i) CHECK(std::abs(d[i] - m[i]) < 1e-13);

  ModeField top(g);
  top[g.slot_of(g.size() / 2 - 1)] = 1.0;
  const auto z = dealias(top);
  for (int i = 0; i < g.size(); ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("dealiased product matches direct convolution") {
  // N not divisible by 3 so that the retained band |j| <= N/3 is alias-free.
  const Grid g = make_grid(2.0 * kPi, 32);
  const int jmax = g.size() / 3;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  auto band_field = [&]() {
    ModeField m(g);
    for (int j = 0; j <= jmax; ++j) {
      const Complex c(nd(rng), j == 0 ? 0.0 : nd(rng));
      m[g.slot_of(j)] = c;
      if (j > 0) m[g.slot_of(-j)] = std::conj(c);
    }
    return m;
  };
  const ModeField a = band_field();
  const ModeField b = band_field();

  const auto fa = inverse(a);
  const auto fb = inverse(b);
  std::vector<double> prod(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) prod[i] = fa[i] * fb[i];
  const auto pm = dealias(forward(g, prod));

  for (int j = -jmax; j <= jmax; ++j) {
    Complex conv = 0.0;
    for (int p = -jmax; p <= jmax; ++p) {
      const int q = j - p;
      if (std::abs(q) > jmax) continue;
      conv += a[g.slot_of(p)] * b[g.slot_of(q)];
    }
    CHECK(std::abs(pm[g.slot_of(j)] - conv) < 1e-12);
  }
}

TEST_CASE("derivative and dealias preserve Hermitian symmetry and commute") {
  const Grid g = make_grid(9.0, 64);
  const auto m = forward(g, random_band_limited(g, 31, 5));
  for (int order : {1, 2, 3}) {
    const auto d = spectral_derivative(m, order);
    CHECK(hermitian_defect(d) < 1e-11);
    const auto a = dealias(spectral_derivative(m, order));
    const auto b = spectral_derivative(dealias(m), order);
    for (int i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
  }
  CHECK(hermitian_defect(dealias(m)) < 1e-13);
}
