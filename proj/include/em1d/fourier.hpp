#pragma once

#include <span>
#include <vector>

#include "em1d/types.hpp"

namespace em1d {

/// Uniform periodic grid on [0, L) with N samples.
///
/// Mode storage follows FFT order: slot i holds the signed mode index
/// j = i for i < N/2 and j = i - N otherwise, so slots cover
/// j in {-N/2, ..., N/2 - 1} and k_j = 2 pi j / L.
class Grid {
 public:
  Grid(double length, int mode_count);

  double length() const { return length_; }
  int size() const { return n_; }
  double dx() const { return length_ / n_; }
  double dk() const { return 2.0 * kPi / length_; }

  int mode_index(int slot) const { return slot < n_ / 2 ? slot : slot - n_; }
  int slot_of(int mode) const { return mode >= 0 ? mode : mode + n_; }
  double wavenumber(int slot) const { return dk() * mode_index(slot); }
  bool is_nyquist(int slot) const { return slot == n_ / 2; }
  double x(int point) const { return dx() * point; }

  /// Wavenumbers in slot (FFT) order.
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid&) const = default;

 private:
  double length_;
  int n_;
};

Grid make_grid(double length, int mode_count);

/// Fourier coefficients of one real field, stored in slot order.
struct ModeField {
  Grid grid;
  std::vector<Complex> coeffs;

  explicit ModeField(const Grid& g) : grid(g), coeffs(static_cast<std::size_t>(g.size())) {}
  ModeField(const Grid& g, std::vector<Complex> c);

  Complex& operator[](int slot) { return coeffs[static_cast<std::size_t>(slot)]; }
  const Complex& operator[](int slot) const { return coeffs[static_cast<std::size_t>(slot)]; }
  int size() const { return grid.size(); }
};

// Normalization: forward carries the 1/N factor, inverse is a plain sum.
//   f(x_n) = sum_j fhat_j exp(i k_j x_n)
//   int |f|^2 dx = dx sum_n |f_n|^2 = L sum_j |fhat_j|^2
ModeField forward(const Grid& grid, std::span<const double> samples);
std::vector<double> inverse(const ModeField& modes);

/// Multiplies every coefficient by (ik)^order. The Nyquist slot has no
/// conjugate partner, so it is zeroed for odd orders.
ModeField spectral_derivative(const ModeField& modes, int order);

/// 2/3 rule: zeroes every slot with |j| > N/3.
ModeField dealias(const ModeField& modes);
bool is_retained(const Grid& grid, int slot);

/// L * sum |fhat_j|^2, summed in slot order.
double parseval_norm_squared(const ModeField& modes);

/// Largest |c(-k) - conj(c(k))| over slots that have a partner.
double hermitian_defect(const ModeField& modes);

}  // namespace em1d
