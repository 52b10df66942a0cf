#include "varsmooth/splines.hpp"

#include "varsmooth/diffs.hpp"

#include <algorithm>
#include <cmath>

namespace vs {

double bspline_eval(int degree, double t) {
  if (t < 0 || t >= degree + 1) return 0.0;
  std::vector<double> N(degree + 1, 0.0);
  int cell = static_cast<int>(std::floor(t));
  if (cell < 0 || cell > degree) return 0.0;
  N[cell] = 1.0;
  for (int d = 1; d <= degree; ++d)
    for (int i = 0; i + d <= degree; ++i)
      N[i] = ((t - i) / d) * N[i] + ((i + d + 1 - t) / d) * N[i + 1];
  return N[0];
}

double bspline_deriv(int degree, double t, int order) {
  if (order == 0) return bspline_eval(degree, t);
  if (order > degree) return 0.0;  // distributional part ignored off knots
  double acc = 0;
  for (int i = 0; i <= order; ++i)
    acc += ((i % 2) ? -1.0 : 1.0) * binomial(order, i) * bspline_eval(degree - order, t - i);
  return acc;
}

namespace {

// active index window along one axis: degree+1 candidates ending at floor(u)
inline int active_base(double u, int degree) {
  return static_cast<int>(std::floor(u)) - degree;
}

}  // namespace

double SplineFn::eval(const RVec& x) const {
  double scale = ipow2(k);
  double w[kMaxDim][16];
  int base[kMaxDim];
  for (int ax = 0; ax < n; ++ax) {
    double u = x[ax] * scale;
    base[ax] = active_base(u, degree);
    for (int i = 0; i <= degree; ++i) w[ax][i] = bspline_eval(degree, u - (base[ax] + i));
  }
  double acc = 0;
  IVec m{0, 0, 0};
  std::function<void(int, double)> rec = [&](int ax, double wt) {
    if (ax == n) {
      acc += wt * coeff(m);
      return;
    }
    for (int i = 0; i <= degree; ++i) {
      if (w[ax][i] == 0) continue;
      m[ax] = base[ax] + i;
      rec(ax + 1, wt * w[ax][i]);
    }
  };
  rec(0, 1.0);
  return acc;
}

double SplineFn::eval_deriv(const RVec& x, const IVec& order) const {
  double scale = ipow2(k);
  double w[kMaxDim][16];
  int base[kMaxDim];
  double pref = 1;
  for (int ax = 0; ax < n; ++ax) {
    double u = x[ax] * scale;
    base[ax] = active_base(u, degree);
    for (int i = 0; i <= degree; ++i)
      w[ax][i] = bspline_deriv(degree, u - (base[ax] + i), order[ax]);
    pref *= std::pow(scale, order[ax]);
  }
  double acc = 0;
  IVec m{0, 0, 0};
  std::function<void(int, double)> rec = [&](int ax, double wt) {
    if (ax == n) {
      acc += wt * coeff(m);
      return;
    }
    for (int i = 0; i <= degree; ++i) {
      if (w[ax][i] == 0) continue;
      m[ax] = base[ax] + i;
      rec(ax + 1, wt * w[ax][i]);
    }
  };
  rec(0, 1.0);
  return acc * pref;
}

SplineFn zero_spline(int n, int degree, int k) {
  SplineFn s;
  s.n = n;
  s.degree = degree;
  s.k = k;
  s.c.assign(s.coef_count(), 0.0);
  return s;
}

namespace {

SplineFn refine_one_level(const SplineFn& s) {
  SplineFn f = zero_spline(s.n, s.degree, s.k + 1);
  int d = s.degree;
  double norm = ipow2(-d);
  std::vector<double> sub(d + 2);
  for (int i = 0; i <= d + 1; ++i) sub[i] = norm * binomial(d + 1, i);

  int count = s.coef_count();
  for (int fl = 0; fl < count; ++fl) {
    double b = s.c[fl];
    if (b == 0) continue;
    IVec m = s.index_from_flat(fl);
    IVec off{0, 0, 0};
    std::function<void(int, double)> rec = [&](int ax, double wt) {
      if (ax == s.n) {
        IVec mf;
        for (int i = 0; i < s.n; ++i) mf[i] = 2 * m[i] + off[i];
        int idx = f.flat(mf);
        if (idx >= 0) f.c[idx] += wt;
        return;
      }
      for (off[ax] = 0; off[ax] <= d + 1; ++off[ax]) rec(ax + 1, wt * sub[off[ax]]);
    };
    rec(0, b);
  }
  return f;
}

}  // namespace

SplineFn refine(const SplineFn& s, int target_level) {
  if (target_level < s.k) throw std::invalid_argument("refine: target level below spline level");
  SplineFn out = s;
  while (out.k < target_level) out = refine_one_level(out);
  return out;
}

std::vector<double> quasi_axis_weights(int l, int k, int m) {
  // psi(t) = prod_{j=1}^{l-1}((m+j)/2^k - t), evaluated with its derivatives
  // at the cell-center abscissa (m+1/2)/2^k.
  int d = l - 1;
  std::vector<double> poly{1.0};  // coefficients in t, ascending
  double scale = ipow2(-k);
  for (int j = 1; j <= d; ++j) {
    double cj = (m + j) * scale;
    std::vector<double> next(poly.size() + 1, 0.0);
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i] += cj * poly[i];   // constant * t^i
      next[i + 1] -= poly[i];    // -t * t^i
    }
    poly = next;
  }
  double xi = (m + 0.5) * scale;
  // derivative values psi^{(s)}(xi), s = 0..d
  std::vector<double> dv(d + 1, 0.0);
  for (int s = 0; s <= d; ++s) {
    double acc = 0;
    for (size_t i = s; i < poly.size(); ++i) {
      double fall = 1;
      for (int t = 0; t < s; ++t) fall *= static_cast<double>(i - t);
      acc += poly[i] * fall * std::pow(xi, static_cast<double>(i - s));
    }
    dv[s] = acc;
  }
  double fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  std::vector<double> a(l, 0.0);
  for (int nu = 0; nu < l; ++nu) {
    int s = d - nu;
    double sign = (s % 2) ? -1.0 : 1.0;
    a[nu] = sign / fact * dv[s];
  }
  return a;
}

namespace {

template <typename JetFn>
QuasiCoeffs quasi_generic(int n, int k, int l, JetFn&& jet, const char* prov) {
  QuasiCoeffs q;
  q.n = n;
  q.k = k;
  q.l = l;
  q.provenance = prov;
  SplineFn shape = zero_spline(n, l - 1, k);
  q.alpha.assign(shape.coef_count(), 0.0);

  // per-axis weight tables for every index value
  int per = shape.per_axis();
  std::vector<std::vector<double>> table(per);
  for (int off = 0; off < per; ++off) table[off] = quasi_axis_weights(l, k, off + shape.lo_index());

  for (int fl = 0; fl < shape.coef_count(); ++fl) {
    IVec m = shape.index_from_flat(fl);
    RVec xi{0, 0, 0};
    for (int i = 0; i < n; ++i) xi[i] = (m[i] + 0.5) * ipow2(-k);
    double acc = 0;
    IVec nu{0, 0, 0};
    std::function<void(int, double)> rec = [&](int ax, double wt) {
      if (ax == n) {
        acc += wt * jet(m, xi, nu);
        return;
      }
      const auto& a = table[m[ax] - shape.lo_index()];
      for (nu[ax] = 0; nu[ax] < l; ++nu[ax])
        if (a[nu[ax]] != 0) rec(ax + 1, wt * a[nu[ax]]);
    };
    rec(0, 1.0);
    q.alpha[fl] = acc;
  }
  return q;
}

}  // namespace

QuasiCoeffs quasi_interpolant(const PiecewisePolyField& pp, int k, int l) {
  if (pp.k != k) throw std::invalid_argument("quasi_interpolant: field level mismatch");
  if (pp.l < l) throw std::invalid_argument("quasi_interpolant: field degree too low");
  int n = pp.n;
  int per = 1 << k;
  auto jet = [&](const IVec& m, const RVec& xi, const IVec& nu) {
    IVec own;
    for (int i = 0; i < n; ++i) own[i] = std::clamp(m[i], 0, per - 1);
    return pp.at(own).deriv(xi, nu);
  };
  return quasi_generic(n, k, l, jet, "piecewise-field");
}

QuasiCoeffs quasi_interpolant_of_spline(const SplineFn& s) {
  int l = s.degree + 1;
  auto jet = [&](const IVec&, const RVec& xi, const IVec& nu) { return s.eval_deriv(xi, nu); };
  return quasi_generic(s.n, s.k, l, jet, "spline-jet");
}

SplineFn coeffs_to_spline(const QuasiCoeffs& q) {
  SplineFn s = zero_spline(q.n, q.l - 1, q.k);
  s.c = q.alpha;
  return s;
}

SplineFn t_operator(const GridFunction& phi, int k, int l, double r, double* realized_A) {
  PiecewisePolyField f = almost_best_field(phi, k, l, r);
  if (realized_A) *realized_A = f.realized_A;
  return coeffs_to_spline(quasi_interpolant(f, k, l));
}

GridFunction sample_spline(const SplineFn& s, int K) {
  GridFunction g;
  g.n = s.n;
  g.K = K;
  g.v.resize(g.cell_count());
  parallel_for(g.cell_count(), [&](int i) { g.v[i] = s.eval(g.cell_center(i)); });
  return g;
}

StabilityReport coeff_stability(const SplineFn& s, double r, int K_eval) {
  GridFunction g = sample_spline(s, K_eval);
  int d = s.degree;
  StabilityReport rep;
  rep.c3 = 2.0 * (d + 1) + 1.0;
  double rmin = kInf, rmax = 0, c1 = 0, c2 = 0;
  int count = cubes_per_level(s.n, s.k);
  for (int i = 0; i < count; ++i) {
    DyadicCube cube{s.n, s.k, cube_from_flat(s.n, s.k, i)};
    double left = lr_norm(g, cube_as_box(cube), r).value;
    // coefficients whose basis support meets the open cube
    double mid_acc = 0, mid_max = 0;
    IVec m{0, 0, 0};
    std::function<void(int)> rec = [&](int ax) {
      if (ax == s.n) {
        double a = std::fabs(s.coeff(m));
        if (is_inf(r)) mid_max = std::max(mid_max, a);
        else mid_acc += std::pow(a, r) * ipow2(-s.k * s.n);
        return;
      }
      for (int off = -d; off <= 0; ++off) {
        m[ax] = cube.m[ax] + off;
        rec(ax + 1);
      }
    };
    rec(0);
    double mid = is_inf(r) ? mid_max : std::pow(mid_acc, 1.0 / r);
    double right = lr_norm(g, cube_box(cube, rep.c3), r).value;
    if (mid > 0) {
      c1 = std::max(c1, left / mid);
      rmin = std::min(rmin, left / mid);
      rmax = std::max(rmax, left / mid);
    }
    if (right > 0 && mid > 0) c2 = std::max(c2, mid / right);
  }
  rep.c1 = c1;
  rep.c2 = c2;
  rep.ratio_min = rmin;
  rep.ratio_max = rmax;
  return rep;
}

}  // namespace vs
