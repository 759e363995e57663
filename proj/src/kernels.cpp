#include "em1d/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "em1d/fourier.hpp"
#include "em1d/green.hpp"

namespace em1d {

int thread_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("EM1D_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0 && cap < n) n = static_cast<int>(cap);
  }
  return n < 1 ? 1 : n;
}

namespace {

// Runs body(i) for i in [0, n) under the chosen policy.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& body) {
  const auto count = static_cast<long long>(n);
  if (exec == Exec::serial) {
    for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace

BlockTable2 green_f_table(const Grid& grid, double t, double gamma, Exec exec) {
  BlockTable2 g(static_cast<std::size_t>(grid.size()));
  for_each_index(g.size(), exec, [&](std::size_t i) { g[i] = green_f(t, grid.wavenumber(static_cast<int>(i)), gamma).entries; });
  return g;
}

BlockTable6 green_e_table(const Grid& grid, double t, Exec exec) {
  BlockTable6 g(static_cast<std::size_t>(grid.size()));
  for_each_index(g.size(), exec, [&](std::size_t i) { g[i] = green_e(t, grid.wavenumber(static_cast<int>(i))).entries; });
  return g;
}

void apply_blocks(const BlockTable2& g, std::span<Vec2c> y, Exec exec) {
  require(g.size() == y.size(), "apply_blocks: table and state sizes differ");
  for_each_index(y.size(), exec, [&](std::size_t i) { y[i] = g[i] * y[i]; });
}

void apply_blocks(const BlockTable6& g, std::span<Vec6c> y, Exec exec) {
  require(g.size() == y.size(), "apply_blocks: table and state sizes differ");
  for_each_index(y.size(), exec, [&](std::size_t i) { y[i] = g[i] * y[i]; });
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out, Exec exec) {
  require(a.size() == b.size() && a.size() == out.size(), "multiply: size mismatch");
  for_each_index(out.size(), exec, [&](std::size_t i) { out[i] = a[i] * b[i]; });
}

double weighted_norm_squared(std::span<const Complex> y, std::span<const double> w, Exec exec) {
  require(y.size() == w.size(), "weighted_norm_squared: size mismatch");
  std::vector<double> terms(y.size());
  for_each_index(y.size(), exec, [&](std::size_t i) { terms[i] = w[i] * std::norm(y[i]); });
  double s = 0.0;
  for (double v : terms) s += v;
  return s;
}

}  // namespace em1d
