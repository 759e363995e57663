#include "em1d/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "em1d/types.hpp"

namespace em1d {

GaussRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n must be positive");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = b;
    j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[static_cast<std::size_t>(i)] = 2.0 * v * v;
  }
  return r;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the center.
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::vector<double> value, error;
};

Panel eval_panel(const VectorIntegrand& f, int dim, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<double> kr(static_cast<std::size_t>(dim), 0.0), ga(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> f1(static_cast<std::size_t>(dim)), f2(static_cast<std::size_t>(dim));
  f(c, f1);
  for (int d = 0; d < dim; ++d) {
    kr[d] = kWgk[7] * f1[d];
    ga[d] = kWg[3] * f1[d];
  }
  for (int i = 0; i < 7; ++i) {
    f(c - h * kXgk[i], f1);
    f(c + h * kXgk[i], f2);
    for (int d = 0; d < dim; ++d) {
      const double s = f1[d] + f2[d];
      kr[d] += kWgk[i] * s;
      if (i % 2 == 1) ga[d] += kWg[i / 2] * s;
    }
  }
  Panel p{a, b, std::vector<double>(static_cast<std::size_t>(dim)), std::vector<double>(static_cast<std::size_t>(dim))};
  for (int d = 0; d < dim; ++d) {
    p.value[d] = h * kr[d];
    p.error[d] = std::abs(h * (kr[d] - ga[d]));
  }
  return p;
}

}  // namespace

QuadratureResult integrate_gk15(const VectorIntegrand& f, int dim, std::vector<double> bp, double rel_tol, int max_panels,
                                double abs_floor) {
  require(dim >= 1, "integrate_gk15: dim must be positive");
  require(bp.size() >= 2, "integrate_gk15: need at least two breakpoints");
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  require(bp.size() >= 2, "integrate_gk15: breakpoints collapse to a point");

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) panels.push_back(eval_panel(f, dim, bp[i], bp[i + 1]));

  std::vector<double> total(static_cast<std::size_t>(dim)), err(static_cast<std::size_t>(dim));
  for (;;) {
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(err.begin(), err.end(), 0.0);
    for (const auto& p : panels)
      for (int d = 0; d < dim; ++d) {
        total[d] += p.value[d];
        err[d] += p.error[d];
      }
    std::vector<bool> open(static_cast<std::size_t>(dim));
    bool ok = true;
    for (int d = 0; d < dim; ++d) {
      open[d] = err[d] > rel_tol * std::abs(total[d]) && err[d] > abs_floor;
      if (open[d]) ok = false;
    }
    if (ok) break;
    if (static_cast<int>(panels.size()) >= max_panels)
      throw NumericalError("integrate_gk15: no convergence within " + std::to_string(max_panels) + " panels");

    std::size_t worst = 0;
    double worst_key = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double key = 0.0;
      for (int d = 0; d < dim; ++d) {
        if (!open[d]) continue;
        const double scale = std::max(std::abs(total[d]), 1e-300);
        key = std::max(key, panels[i].error[d] / scale);
      }
      if (key > worst_key) {
        worst_key = key;
        worst = i;
      }
    }
    const double a = panels[worst].a, b = panels[worst].b, m = 0.5 * (a + b);
    if (!(m > a && m < b)) throw NumericalError("integrate_gk15: panel width underflow");
    panels[worst] = eval_panel(f, dim, a, m);
    panels.push_back(eval_panel(f, dim, m, b));
  }
  return QuadratureResult{total, err, static_cast<int>(panels.size())};
}

}  // namespace em1d
