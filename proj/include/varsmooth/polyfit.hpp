#pragma once

#include "varsmooth/gridfn.hpp"

namespace vs {

enum class DegreeMode { Total, Coordinate };

// Polynomial on a cube, stored in the power basis of the cube-local chart
// xi = 2(x - center)/side. Coefficients are indexed per-axis with degrees
// 0..l-1 (total-degree fits leave the excess entries at zero).
struct LocalPoly {
  int n = 1;
  int l = 1;
  Box chart;
  std::vector<double> coef;  // size l^n, row-major, last axis fastest
  double r = 2;
  double error = 0;
  double realized_A = 1.0;

  int coef_count() const {
    int c = 1;
    for (int i = 0; i < n; ++i) c *= l;
    return c;
  }
  double eval(const RVec& x) const;
  // Derivative of the stated per-axis order at x (x may lie off the cube).
  double deriv(const RVec& x, const IVec& order) const;
};

struct PiecewisePolyField {
  int n = 1;
  int k = 0;
  int l = 1;
  std::vector<LocalPoly> piece;  // one per level-k cube, row-major
  double realized_A = 1.0;

  const LocalPoly& at(const IVec& m) const { return piece[cube_flat_index(n, k, m)]; }
};

// Best (or almost-best) L_r approximation on Q ∩ [0,1]^n. Exact for r = 2;
// Lawson iteration for r = inf and IRLS otherwise, with the realized
// almost-best factor recorded against a computed lower bound where available.
LocalPoly best_poly(const GridFunction& phi, const Box& Q, int l, double r, DegreeMode mode);

// Per-cube almost-best polynomials of coordinate degree < l at level k.
PiecewisePolyField almost_best_field(const GridFunction& phi, int k, int l, double r);

}  // namespace vs
