#pragma once

#include <span>
#include <vector>

#include "em1d/types.hpp"

namespace em1d {

class Grid;

/// Execution policy for the per-mode and per-point kernels. Both policies
/// produce bitwise identical results: work is split per element and every
/// reduction is summed serially in index order.
enum class Exec { serial, parallel };

/// Threads used by Exec::parallel: omp_get_max_threads() capped by the
/// EM1D_THREADS environment variable when that is set to a positive integer.
int thread_count();

/// One 2x2 / 6x6 block per mode.
using BlockTable2 = std::vector<Mat2c>;
using BlockTable6 = std::vector<Mat6c>;

/// G_f(t, k_j) and G_e(t, k_j) for every slot of the grid.
BlockTable2 green_f_table(const Grid& grid, double t, double gamma, Exec exec = Exec::parallel);
BlockTable6 green_e_table(const Grid& grid, double t, Exec exec = Exec::parallel);

/// y_j <- G_j y_j for every mode.
void apply_blocks(const BlockTable2& g, std::span<Vec2c> y, Exec exec = Exec::parallel);
void apply_blocks(const BlockTable6& g, std::span<Vec6c> y, Exec exec = Exec::parallel);

/// out = a .* b pointwise.
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out, Exec exec = Exec::parallel);

/// sum_j w_j |y_j|^2 in slot order.
double weighted_norm_squared(std::span<const Complex> y, std::span<const double> w, Exec exec = Exec::parallel);

}  // namespace em1d
