#include "em1d/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace em1d {

Grid::Grid(double length, int mode_count) : length_(length), n_(mode_count) {
  require(length > 0.0, "grid length must be positive, got " + std::to_string(length));
  require(mode_count >= 8, "grid mode count must be at least 8, got " + std::to_string(mode_count));
  require(mode_count % 2 == 0, "grid mode count must be even, got " + std::to_string(mode_count));
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) k[static_cast<std::size_t>(i)] = wavenumber(i);
  return k;
}

Grid make_grid(double length, int mode_count) { return Grid(length, mode_count); }

ModeField::ModeField(const Grid& g, std::vector<Complex> c) : grid(g), coeffs(std::move(c)) {
  require(static_cast<int>(coeffs.size()) == g.size(), "mode field size does not match grid");
}

namespace {

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(int n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n))));
}

// Plans are created once per size under a lock (the FFTW planner is not
// reentrant); execution on caller-owned buffers is thread-safe.
class PlanPair {
 public:
  explicit PlanPair(int n) : n_(n) {
    auto a = make_buffer(n);
    auto b = make_buffer(n);
    fwd_ = fftw_plan_dft_1d(n, a.get(), b.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, a.get(), b.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  void run(bool forward_dir, fftw_complex* in, fftw_complex* out) const {
    fftw_execute_dft(forward_dir ? fwd_ : bwd_, in, out);
  }
  int size() const { return n_; }

 private:
  int n_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

const PlanPair& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace

ModeField forward(const Grid& grid, std::span<const double> samples) {
  const int n = grid.size();
  require(static_cast<int>(samples.size()) == n,
          "forward: expected " + std::to_string(n) + " samples, got " + std::to_string(samples.size()));
  auto in = make_buffer(n);
  auto out = make_buffer(n);
  for (int i = 0; i < n; ++i) {
    in[i][0] = samples[static_cast<std::size_t>(i)];
    in[i][1] = 0.0;
  }
  plans_for(n).run(true, in.get(), out.get());
  ModeField m(grid);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) m[i] = Complex(out[i][0] * scale, out[i][1] * scale);
  return m;
}

std::vector<double> inverse(const ModeField& modes) {
  const int n = modes.size();
  auto in = make_buffer(n);
  auto out = make_buffer(n);
  for (int i = 0; i < n; ++i) {
    in[i][0] = modes[i].real();
    in[i][1] = modes[i].imag();
  }
  plans_for(n).run(false, in.get(), out.get());
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = out[i][0];
  return f;
}

ModeField spectral_derivative(const ModeField& modes, int order) {
  require(order >= 0, "spectral_derivative: order must be nonnegative");
  if (order == 0) return modes;
  ModeField d(modes.grid);
  const Grid& g = modes.grid;
  for (int i = 0; i < g.size(); ++i) {
    if ((order % 2 == 1) && g.is_nyquist(i)) {
      d[i] = 0.0;
      continue;
    }
    const Complex ik = I * g.wavenumber(i);
    Complex mult = 1.0;
    for (int p = 0; p < order; ++p) mult *= ik;
    d[i] = mult * modes[i];
  }
  return d;
}

bool is_retained(const Grid& grid, int slot) {
  const int j = grid.mode_index(slot);
  return 3 * std::abs(j) <= grid.size();
}

ModeField dealias(const ModeField& modes) {
  ModeField d = modes;
  for (int i = 0; i < d.size(); ++i)
    if (!is_retained(d.grid, i)) d[i] = 0.0;
  return d;
}

double parseval_norm_squared(const ModeField& modes) {
  double s = 0.0;
  for (const auto& c : modes.coeffs) s += std::norm(c);
  return modes.grid.length() * s;
}

double hermitian_defect(const ModeField& modes) {
  const Grid& g = modes.grid;
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    const int partner = g.slot_of(-g.mode_index(i));
    worst = std::max(worst, std::abs(modes[partner] - std::conj(modes[i])));
  }
  return worst;
}

}  // namespace em1d
