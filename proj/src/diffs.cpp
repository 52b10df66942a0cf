#include "varsmooth/diffs.hpp"

#include <algorithm>
#include <cmath>

namespace vs {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

namespace {

// signs (-1)^{l+j} C_l^j for j = 0..l
std::vector<double> diff_weights(int l) {
  std::vector<double> w(l + 1);
  for (int j = 0; j <= l; ++j) w[j] = binomial(l, j) * (((l + j) % 2) ? -1.0 : 1.0);
  return w;
}

struct AxisRange {
  int lo, hi;  // inclusive; lo > hi means empty
};

// Cell indices i whose center stays admissible for the segment test
// lo <= (i+0.5)*h and (i+0.5+l*nu)*h <= hi on one axis.
AxisRange valid_range(double lo, double hi, double cell, int per, int lnu) {
  double a = lo / cell - 0.5, b = hi / cell - 0.5;
  int i0 = static_cast<int>(std::ceil(a - 1e-9));
  int i1 = static_cast<int>(std::floor(b + 1e-9));
  i0 = std::max(i0, std::max(0, -lnu));
  i1 = std::min(i1, std::min(per - 1, per - 1 - lnu));
  // shifted endpoint constraint
  i0 = std::max(i0, static_cast<int>(std::ceil(a - lnu - 1e-9)));
  i1 = std::min(i1, static_cast<int>(std::floor(b - lnu + 1e-9)));
  return {i0, i1};
}

}  // namespace

double forward_diff(const GridFunction& g, const RVec& h, const RVec& x, int l,
                    const Box* omega) {
  Box om = omega ? *omega : unit_box(g.n);
  for (int ax = 0; ax < g.n; ++ax) {
    double a = x[ax], b = x[ax] + l * h[ax];
    double lo = std::max(om.lo[ax], 0.0), hi = std::min(om.hi(ax), 1.0);
    if (std::min(a, b) < lo - 1e-12 || std::max(a, b) > hi + 1e-12) return 0.0;
  }
  auto w = diff_weights(l);
  double acc = 0;
  RVec p;
  for (int j = 0; j <= l; ++j) {
    for (int ax = 0; ax < g.n; ++ax) p[ax] = x[ax] + j * h[ax];
    acc += w[j] * g.value_at(p);
  }
  return acc;
}

double avg_diff_at_cell(const GridFunction& g, double t, const IVec& cell, int l, double r) {
  int per = g.per_axis();
  double cs = g.cell_size();
  int R = static_cast<int>(std::ceil(t / cs - 1e-9)) - 1;  // |nu|*cs < t
  R = std::max(R, 0);
  auto w = diff_weights(l);
  double cell_vol = g.cell_volume();
  double acc = 0, mx = 0;

  IVec nu{0, 0, 0};
  std::function<void(int)> rec = [&](int ax) {
    if (ax == g.n) {
      // segment containment in the unit box, integer form
      for (int a = 0; a < g.n; ++a) {
        int e = cell[a] + l * nu[a];
        if (e < 0 || e >= per) return;
      }
      double d = 0;
      for (int j = 0; j <= l; ++j) {
        IVec c;
        for (int a = 0; a < g.n; ++a) c[a] = cell[a] + j * nu[a];
        d += w[j] * g.at(c);
      }
      double ad = std::fabs(d);
      if (is_inf(r)) mx = std::max(mx, ad);
      else acc += std::pow(ad, r) * cell_vol;
      return;
    }
    for (nu[ax] = -R; nu[ax] <= R; ++nu[ax]) rec(ax + 1);
  };
  rec(0);
  if (is_inf(r)) return mx;
  double tn = std::pow(t, g.n);
  return std::pow(acc / tn, 1.0 / r);
}

double avg_diff(const GridFunction& g, double t, const RVec& x, int l, double r) {
  if (t <= 0) throw std::invalid_argument("avg_diff: t must be positive");
  return avg_diff_at_cell(g, t, owning_cube(g.n, g.K, x), l, r);
}

double delta_lr(const GridFunction& g, const Box& Q, int l, double r, OmegaMode mode) {
  double rq = Q.side[0];
  if (rq <= 0) throw std::invalid_argument("delta_lr: degenerate cube");
  int per = g.per_axis();
  double cs = g.cell_size();

  CellWindow win = cell_window(g.n, g.K, Q);
  for (int ax = 0; ax < g.n; ++ax)
    if (win.first[ax] > win.last[ax]) return 0.0;

  Box om = unit_box(g.n);
  if (mode == OmegaMode::Cube) {
    for (int ax = 0; ax < g.n; ++ax) {
      om.lo[ax] = std::max(Q.lo[ax], 0.0);
      om.side[ax] = std::min(Q.hi(ax), 1.0) - om.lo[ax];
    }
  }

  int R = static_cast<int>(std::ceil(rq / cs - 1e-9)) - 1;
  R = std::max(R, 0);
  auto w = diff_weights(l);
  double cell_vol = g.cell_volume();

  double acc = 0, mx = 0;
  IVec nu{0, 0, 0};
  AxisRange rg[kMaxDim];

  std::function<void(int)> loop_x = [&](int) {};
  std::function<void(int)> loop_nu = [&](int ax) {
    if (ax == g.n) {
      // per-axis admissible x ranges for this step vector
      for (int a = 0; a < g.n; ++a) {
        AxisRange ar = valid_range(om.lo[a], om.hi(a), cs, per, l * nu[a]);
        ar.lo = std::max(ar.lo, win.first[a]);
        ar.hi = std::min(ar.hi, win.last[a]);
        if (ar.lo > ar.hi) return;
        rg[a] = ar;
      }
      IVec c{0, 0, 0};
      std::function<void(int, double)> loop_cells = [&](int a, double wt) {
        if (a == g.n) {
          double d = 0;
          for (int j = 0; j <= l; ++j) {
            IVec cc;
            for (int b = 0; b < g.n; ++b) cc[b] = c[b] + j * nu[b];
            d += w[j] * g.at(cc);
          }
          double ad = std::fabs(d);
          if (is_inf(r)) mx = std::max(mx, ad);
          else acc += std::pow(ad, r) * wt * cell_vol * cell_vol;
          return;
        }
        for (int i = rg[a].lo; i <= rg[a].hi; ++i) {
          c[a] = i;
          loop_cells(a + 1, wt * win.axis_weight[a][i - win.first[a]]);
        }
      };
      loop_cells(0, 1.0);
      return;
    }
    for (nu[ax] = -R; nu[ax] <= R; ++nu[ax]) loop_nu(ax + 1);
  };
  loop_nu(0);

  if (is_inf(r)) return mx;
  double norm = std::pow(rq, 2.0 * g.n);
  return std::pow(acc / norm, 1.0 / r);
}

double modulus(const GridFunction& g, const Box& Q, int l, double r, int H) {
  if (H < 1) throw std::invalid_argument("modulus: H must be >= 1");
  double rq = Q.side[0];
  double cs = g.cell_size();
  Box om = unit_box(g.n);
  for (int ax = 0; ax < g.n; ++ax) {
    om.lo[ax] = std::max(Q.lo[ax], 0.0);
    om.side[ax] = std::min(Q.hi(ax), 1.0) - om.lo[ax];
    if (om.side[ax] <= 0) return 0.0;
  }
  CellWindow win = cell_window(g.n, g.K, Q);
  for (int ax = 0; ax < g.n; ++ax)
    if (win.first[ax] > win.last[ax]) return 0.0;

  // steps on the fine lattice: exact center-to-center lookups, at most H
  // distinct magnitudes per sign and axis, spread at fixed fractions of the
  // admissible range so refinements sample corresponding steps
  int R = std::max(static_cast<int>(std::ceil(rq / cs - 1e-9)) - 1, 1);
  std::vector<int> offsets{0};
  int prev = 0;
  for (int j = 1; j <= std::min(H, R); ++j) {
    int v = std::max(1, static_cast<int>(std::lround(static_cast<double>(R) * j / std::min(H, R))));
    if (v == prev) continue;
    prev = v;
    offsets.push_back(v);
    offsets.push_back(-v);
  }
  if (offsets.size() == 1) {
    offsets.push_back(1);
    offsets.push_back(-1);
  }

  auto w = diff_weights(l);
  double cell_vol = g.cell_volume();
  int per = g.per_axis();
  double best = 0;
  IVec nu{0, 0, 0};
  std::function<void(int)> rec = [&](int ax) {
    if (ax == g.n) {
      bool allzero = true;
      for (int a = 0; a < g.n; ++a)
        if (nu[a] != 0) allzero = false;
      if (allzero) return;
      double acc = 0, mxv = 0;
      IVec c{0, 0, 0};
      std::function<void(int, double)> cells = [&](int a, double wt) {
        if (a == g.n) {
          double d = 0;
          bool ok = true;
          for (int b = 0; b < g.n; ++b) {
            double x = (c[b] + 0.5) * cs;
            double xe = x + l * nu[b] * cs;
            if (std::min(x, xe) < om.lo[b] - 1e-12 || std::max(x, xe) > om.hi(b) + 1e-12)
              ok = false;
            int ce = c[b] + l * nu[b];
            if (ce < 0 || ce >= per) ok = false;
          }
          if (ok) {
            for (int jj = 0; jj <= l; ++jj) {
              IVec cc;
              for (int b = 0; b < g.n; ++b) cc[b] = c[b] + jj * nu[b];
              d += w[jj] * g.at(cc);
            }
          }
          double ad = std::fabs(d);
          if (is_inf(r)) mxv = std::max(mxv, ad);
          else acc += std::pow(ad, r) * wt * cell_vol;
          return;
        }
        for (int i = win.first[a]; i <= win.last[a]; ++i) {
          c[a] = i;
          cells(a + 1, wt * win.axis_weight[a][i - win.first[a]]);
        }
      };
      cells(0, 1.0);
      best = std::max(best, is_inf(r) ? mxv : std::pow(acc, 1.0 / r));
      return;
    }
    for (int off : offsets) {
      nu[ax] = off;
      rec(ax + 1);
    }
  };
  rec(0);
  return best;
}

}  // namespace vs
