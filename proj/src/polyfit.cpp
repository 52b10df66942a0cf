#include "varsmooth/polyfit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace vs {

namespace {

// Monomial coefficients of the Legendre polynomial of the given degree.
std::vector<double> legendre_coeffs(int degree) {
  std::vector<std::vector<double>> P;
  P.push_back({1.0});
  if (degree >= 1) P.push_back({0.0, 1.0});
  for (int k = 1; k < degree; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (size_t i = 0; i < P[k].size(); ++i) next[i + 1] += (2.0 * k + 1.0) / (k + 1.0) * P[k][i];
    for (size_t i = 0; i < P[k - 1].size(); ++i) next[i] -= static_cast<double>(k) / (k + 1.0) * P[k - 1][i];
    P.push_back(next);
  }
  P[degree].resize(degree + 1, 0.0);
  return P[degree];
}

double legendre_eval(int degree, double x) {
  double p0 = 1, p1 = x;
  if (degree == 0) return p0;
  for (int k = 1; k < degree; ++k) {
    double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

struct FitGrid {
  std::vector<RVec> xi;       // chart coordinates of cell centers
  std::vector<double> w;      // quadrature weights (overlap * cell volume)
  std::vector<double> target; // phi values
};

FitGrid collect_cells(const GridFunction& phi, const Box& Q) {
  FitGrid fg;
  CellWindow win = cell_window(phi.n, phi.K, Q);
  for (int ax = 0; ax < phi.n; ++ax)
    if (win.first[ax] > win.last[ax]) return fg;
  double cs = phi.cell_size();
  double cv = phi.cell_volume();
  IVec c{0, 0, 0};
  std::function<void(int, double)> rec = [&](int ax, double wt) {
    if (ax == phi.n) {
      RVec xi{0, 0, 0};
      for (int a = 0; a < phi.n; ++a) {
        double x = (c[a] + 0.5) * cs;
        xi[a] = 2.0 * (x - (Q.lo[a] + 0.5 * Q.side[a])) / Q.side[a];
      }
      fg.xi.push_back(xi);
      fg.w.push_back(wt * cv);
      fg.target.push_back(phi.at(c));
      return;
    }
    for (int i = win.first[ax]; i <= win.last[ax]; ++i) {
      c[ax] = i;
      rec(ax + 1, wt * win.axis_weight[ax][i - win.first[ax]]);
    }
  };
  rec(0, 1.0);
  return fg;
}

std::vector<IVec> basis_indices(int n, int l, DegreeMode mode) {
  std::vector<IVec> idx;
  IVec nu{0, 0, 0};
  std::function<void(int)> rec = [&](int ax) {
    if (ax == n) {
      int total = 0;
      for (int i = 0; i < n; ++i) total += nu[i];
      if (mode == DegreeMode::Coordinate || total < l) idx.push_back(nu);
      return;
    }
    for (nu[ax] = 0; nu[ax] < l; ++nu[ax]) rec(ax + 1);
  };
  rec(0);
  return idx;
}

Eigen::VectorXd weighted_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w) {
  Eigen::MatrixXd G = A.transpose() * w.asDiagonal() * A;
  Eigen::VectorXd b = A.transpose() * (w.array() * y.array()).matrix();
  G.diagonal().array() += 1e-13 * (G.trace() + 1.0);
  return G.ldlt().solve(b);
}

}  // namespace

double LocalPoly::eval(const RVec& x) const {
  RVec xi{0, 0, 0};
  for (int i = 0; i < n; ++i)
    xi[i] = 2.0 * (x[i] - (chart.lo[i] + 0.5 * chart.side[i])) / chart.side[i];
  double acc = 0;
  IVec nu{0, 0, 0};
  std::function<void(int, double, int)> rec = [&](int ax, double mono, int flat) {
    if (ax == n) {
      acc += coef[flat] * mono;
      return;
    }
    double p = 1;
    for (nu[ax] = 0; nu[ax] < l; ++nu[ax]) {
      rec(ax + 1, mono * p, flat * l + nu[ax]);
      p *= xi[ax];
    }
  };
  rec(0, 1.0, 0);
  return acc;
}

double LocalPoly::deriv(const RVec& x, const IVec& order) const {
  RVec xi{0, 0, 0};
  double scale = 1;
  for (int i = 0; i < n; ++i) {
    xi[i] = 2.0 * (x[i] - (chart.lo[i] + 0.5 * chart.side[i])) / chart.side[i];
    scale *= std::pow(2.0 / chart.side[i], order[i]);
  }
  double acc = 0;
  IVec nu{0, 0, 0};
  std::function<void(int, double, int)> rec = [&](int ax, double mono, int flat) {
    if (ax == n) {
      acc += coef[flat] * mono;
      return;
    }
    for (nu[ax] = 0; nu[ax] < l; ++nu[ax]) {
      double m = 0;
      if (nu[ax] >= order[ax]) {
        double fall = 1;
        for (int t = 0; t < order[ax]; ++t) fall *= (nu[ax] - t);
        m = fall * std::pow(xi[ax], nu[ax] - order[ax]);
      }
      if (m != 0) rec(ax + 1, mono * m, flat * l + nu[ax]);
    }
  };
  rec(0, 1.0, 0);
  return acc * scale;
}

LocalPoly best_poly(const GridFunction& phi, const Box& Q, int l, double r, DegreeMode mode) {
  for (int ax = 0; ax < phi.n; ++ax)
    if (Q.side[ax] < phi.cell_size() * (1 - 1e-12))
      throw std::runtime_error("best_poly: cube smaller than one fine cell");
  FitGrid fg = collect_cells(phi, Q);
  int ncell = static_cast<int>(fg.w.size());
  if (ncell == 0) throw std::runtime_error("best_poly: cube does not meet any fine cell");

  auto idx = basis_indices(phi.n, l, mode);
  int nb = static_cast<int>(idx.size());

  Eigen::MatrixXd A(ncell, nb);
  for (int c = 0; c < ncell; ++c)
    for (int b = 0; b < nb; ++b) {
      double v = 1;
      for (int ax = 0; ax < phi.n; ++ax) v *= legendre_eval(idx[b][ax], fg.xi[c][ax]);
      A(c, b) = v;
    }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(fg.target.data(), ncell);
  Eigen::VectorXd wq = Eigen::Map<const Eigen::VectorXd>(fg.w.data(), ncell);

  Eigen::VectorXd coef;
  double realized_A = 1.0;

  if (r == 2.0) {
    coef = weighted_ls(A, y, wq);
  } else if (is_inf(r)) {
    // Lawson iteration; the normalized weighted rms error lower-bounds the
    // minimax error at every step, certifying the realized factor.
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(ncell) / ncell;
    double lower = 0;
    Eigen::VectorXd best_c;
    double best_err = kInf;
    for (int it = 0; it < 120; ++it) {
      Eigen::VectorXd c = weighted_ls(A, y, lam);
      Eigen::VectorXd res = y - A * c;
      lower = std::max(lower, std::sqrt((lam.array() * res.array().square()).sum()));
      double err = res.array().abs().maxCoeff();
      if (err < best_err) {
        best_err = err;
        best_c = c;
      }
      lam = lam.array() * res.array().abs().max(1e-300);
      double s = lam.sum();
      if (s <= 0) break;
      lam /= s;
      if (best_err <= lower * (1.0 + 1e-12)) break;
    }
    coef = best_c;
    realized_A = (lower > 0) ? best_err / lower : 1.0;
  } else {
    // IRLS for the remaining exponents, warm-started from the r=2 solution.
    coef = weighted_ls(A, y, wq);
    double rr = std::max(r, 0.05);
    Eigen::VectorXd res = y - A * coef;
    double scale = std::max(res.array().abs().maxCoeff(), 1e-14);
    for (int it = 0; it < 60; ++it) {
      Eigen::VectorXd wi(ncell);
      for (int c = 0; c < ncell; ++c) {
        double a = std::max(std::fabs(res(c)), 1e-8 * scale);
        wi(c) = wq(c) * std::pow(a, rr - 2.0);
      }
      Eigen::VectorXd cn = weighted_ls(A, y, wi);
      double step = (cn - coef).norm();
      coef = cn;
      res = y - A * coef;
      if (step < 1e-10 * (1.0 + coef.norm())) break;
    }
    realized_A = (r >= 1.0) ? 1.05 : 1.25;
  }

  // achieved L_r error with the quadrature weights
  Eigen::VectorXd res = y - A * coef;
  double err;
  if (is_inf(r)) {
    err = res.array().abs().maxCoeff();
  } else {
    double s = 0;
    for (int c = 0; c < ncell; ++c) s += std::pow(std::fabs(res(c)), r) * fg.w[c];
    err = std::pow(s, 1.0 / r);
  }

  // convert Legendre tensor coefficients to the power basis
  LocalPoly p;
  p.n = phi.n;
  p.l = l;
  p.chart = Q;
  p.r = r;
  p.error = err;
  p.realized_A = realized_A;
  p.coef.assign(p.coef_count(), 0.0);
  std::vector<std::vector<double>> leg(l);
  for (int d = 0; d < l; ++d) leg[d] = legendre_coeffs(d);
  for (int b = 0; b < nb; ++b) {
    // expand the tensor Legendre basis function into monomials
    IVec nu = idx[b];
    IVec mono{0, 0, 0};
    std::function<void(int, double)> rec = [&](int ax, double c) {
      if (ax == phi.n) {
        int flat = 0;
        for (int i = 0; i < phi.n; ++i) flat = flat * l + mono[i];
        p.coef[flat] += coef(b) * c;
        return;
      }
      for (mono[ax] = 0; mono[ax] <= nu[ax]; ++mono[ax]) {
        double lc = leg[nu[ax]][mono[ax]];
        if (lc != 0) rec(ax + 1, c * lc);
      }
    };
    rec(0, 1.0);
  }
  return p;
}

PiecewisePolyField almost_best_field(const GridFunction& phi, int k, int l, double r) {
  PiecewisePolyField f;
  f.n = phi.n;
  f.k = k;
  f.l = l;
  int count = cubes_per_level(phi.n, k);
  f.piece.resize(count);
  std::vector<double> As(count, 1.0);
  parallel_for(count, [&](int i) {
    DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
    f.piece[i] = best_poly(phi, cube_as_box(c), l, r, DegreeMode::Coordinate);
    As[i] = f.piece[i].realized_A;
  });
  f.realized_A = *std::max_element(As.begin(), As.end());
  return f;
}

}  // namespace vs
