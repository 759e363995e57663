#pragma once

#include <functional>
#include <span>
#include <vector>

namespace em1d {

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Golub-Welsch).
GaussRule gauss_legendre(int n);

/// Vector integrand: f(x, out) writes dim values.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

struct QuadratureResult {
  std::vector<double> value;
  std::vector<double> error;  ///< |Kronrod - Gauss| summed over panels
  int panels = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod over the panels between
/// consecutive sorted breakpoints. The panel with the largest relative error
/// contribution is bisected until every component meets rel_tol (or its
/// absolute error is below abs_floor). Throws NumericalError past max_panels.
QuadratureResult integrate_gk15(const VectorIntegrand& f, int dim, std::vector<double> breakpoints, double rel_tol,
                                int max_panels = 20000, double abs_floor = 0.0);

}  // namespace em1d
