#include <doctest.h>

#include <cstdlib>
#include <random>

#include "em1d/fourier.hpp"
#include "em1d/kernels.hpp"

using namespace em1d;

TEST_CASE("serial and parallel green tables agree bitwise") {
  const Grid g(200.0 * kPi, 1024);
  for (double t : {0.0, 0.5, 20.0}) {
    const auto fs = green_f_table(g, t, 1.0, Exec::serial);
    const auto fp = green_f_table(g, t, 1.0, Exec::parallel);
    const auto es = green_e_table(g, t, Exec::serial);
    const auto ep = green_e_table(g, t, Exec::parallel);
    bool same = true;
    for (std::size_t i = 0; i < fs.size(); ++i) same = same && (fs[i].array() == fp[i].array()).all() &&
                                                     (es[i].array() == ep[i].array()).all();
    CHECK(same);
  }
}

TEST_CASE("serial and parallel block application and reductions agree bitwise") {
  const Grid g(50.0, 512);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<Vec6c> y(512);
  for (auto& v : y)
    for (int c = 0; c < 6; ++c) v(c) = Complex(nd(rng), nd(rng));
  auto ys = y, yp = y;
  const auto tab = green_e_table(g, 3.0, Exec::serial);
  apply_blocks(tab, ys, Exec::serial);
  apply_blocks(tab, yp, Exec::parallel);
  bool same = true;
  for (std::size_t i = 0; i < y.size(); ++i) same = same && (ys[i].array() == yp[i].array()).all();
  CHECK(same);

  std::vector<double> a(1000), b(1000), os(1000), op(1000), w(1000);
  std::vector<Complex> z(1000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = nd(rng);
    b[i] = nd(rng);
    w[i] = std::abs(nd(rng));
    z[i] = Complex(nd(rng), nd(rng));
  }
  multiply(a, b, os, Exec::serial);
  multiply(a, b, op, Exec::parallel);
  CHECK(os == op);
  CHECK(weighted_norm_squared(z, w, Exec::serial) == weighted_norm_squared(z, w, Exec::parallel));
}

TEST_CASE("thread cap from the environment") {
  const int base = thread_count();
  CHECK(base >= 1);
  setenv("EM1D_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  setenv("EM1D_THREADS", "junk", 1);
  CHECK(thread_count() == base);
  unsetenv("EM1D_THREADS");
}

TEST_CASE("size mismatches are rejected") {
  std::vector<double> a(3), b(4), o(3);
  CHECK_THROWS_AS(multiply(a, b, o), InvalidArgument);
}
