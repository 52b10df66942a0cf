#include "varsmooth/norms.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

namespace vs {

namespace {

double weighted_lp_over_cells(const std::vector<double>& vals, double cell_vol, double p) {
  if (is_inf(p)) {
    double m = 0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  double s = 0;
  for (double v : vals) s += std::pow(v, p) * cell_vol;
  return std::pow(s, 1.0 / p);
}

double mass_lp(const std::vector<double>& weights, const std::vector<double>& vals, double p) {
  if (is_inf(p)) {
    double m = 0;
    for (size_t i = 0; i < vals.size(); ++i) m = std::max(m, weights[i] * vals[i]);
    return m;
  }
  double s = 0;
  for (size_t i = 0; i < vals.size(); ++i) s += std::pow(weights[i] * vals[i], p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

NormBreakdown norm_bbar(const GridFunction& phi, const WeightSequence& t, const BesovParams& bp) {
  NormBreakdown nb;
  nb.variant = "bbar";
  double phir = lr_norm(phi, unit_box(phi.n), bp.r).value;
  // the translated window (x + I^n) covers the whole unit box for every x
  std::vector<double> zero_vals(phi.cell_count());
  for (int i = 0; i < phi.cell_count(); ++i) zero_vals[i] = t.level[0].v[i] * phir;
  nb.zero_term = weighted_lp_over_cells(zero_vals, phi.cell_volume(), bp.p);

  for (int k = 0; k <= t.K_work; ++k) {
    std::vector<double> vals(phi.cell_count());
    parallel_for(phi.cell_count(), [&](int i) {
      IVec cell = cube_from_flat(phi.n, phi.K, i);
      double dv = avg_diff_at_cell(phi, ipow2(-k), cell, bp.l, bp.r);
      vals[i] = t.level[k].v[i] * dv;
    });
    nb.level_terms.push_back(weighted_lp_over_cells(vals, phi.cell_volume(), bp.p));
  }
  nb.total = nb.recompute(bp.q);
  return nb;
}

namespace {

// Per-cell h-integral sum_h |D^l(h)g|^r vol_h over the step window t I^n with
// full-domain clipping; independent of the sliding x-window, so the window
// norm reduces to a weighted sum over cells.
std::vector<double> step_integral_per_cell(const GridFunction& g, double t, int l, double r) {
  std::vector<double> P(g.cell_count(), 0.0);
  int per = g.per_axis();
  double cs = g.cell_size();
  int R = std::max(static_cast<int>(std::ceil(t / cs - 1e-9)) - 1, 0);
  std::vector<double> w(l + 1);
  for (int j = 0; j <= l; ++j) w[j] = binomial(l, j) * (((l + j) % 2) ? -1.0 : 1.0);
  double vol_h = g.cell_volume();
  parallel_for(g.cell_count(), [&](int i) {
    IVec c = cube_from_flat(g.n, g.K, i);
    double acc = 0, mx = 0;
    IVec nu{0, 0, 0};
    std::function<void(int)> rec = [&](int ax) {
      if (ax == g.n) {
        for (int a = 0; a < g.n; ++a) {
          int e = c[a] + l * nu[a];
          if (e < 0 || e >= per) return;
        }
        double d = 0;
        for (int j = 0; j <= l; ++j) {
          IVec cc;
          for (int a = 0; a < g.n; ++a) cc[a] = c[a] + j * nu[a];
          d += w[j] * g.at(cc);
        }
        double ad = std::fabs(d);
        if (is_inf(r)) mx = std::max(mx, ad);
        else acc += std::pow(ad, r) * vol_h;
        return;
      }
      for (nu[ax] = -R; nu[ax] <= R; ++nu[ax]) rec(ax + 1);
    };
    rec(0);
    P[i] = is_inf(r) ? mx : acc;
  });
  return P;
}

}  // namespace

NormBreakdown norm_btilde(const GridFunction& phi, const WeightSequence& t, const BesovParams& bp) {
  NormBreakdown nb;
  nb.variant = "btilde";
  double phir = lr_norm(phi, unit_box(phi.n), bp.r).value;
  std::vector<double> zero_vals(phi.cell_count());
  for (int i = 0; i < phi.cell_count(); ++i) zero_vals[i] = t.level[0].v[i] * phir;
  nb.zero_term = weighted_lp_over_cells(zero_vals, phi.cell_volume(), bp.p);

  for (int k = 0; k <= t.K_work; ++k) {
    std::vector<double> vals(phi.cell_count());
    double half = ipow2(-k);
    // the window has side 2*half, so steps range over (2*half) I^n
    std::vector<double> P = step_integral_per_cell(phi, 2 * half, bp.l, bp.r);
    double cell_vol = phi.cell_volume();
    parallel_for(phi.cell_count(), [&](int i) {
      RVec x = phi.cell_center(i);
      Box wbox;
      wbox.n = phi.n;
      for (int ax = 0; ax < phi.n; ++ax) {
        wbox.lo[ax] = x[ax] - half;
        wbox.side[ax] = 2 * half;
      }
      CellWindow win = cell_window(phi.n, phi.K, wbox);
      double acc = 0, mx = 0;
      IVec c{0, 0, 0};
      std::function<void(int, double)> rec = [&](int ax, double wt) {
        if (ax == phi.n) {
          double p = P[cube_flat_index(phi.n, phi.K, c)];
          if (is_inf(bp.r)) {
            if (wt > 0) mx = std::max(mx, p);
          } else {
            acc += p * wt * cell_vol;
          }
          return;
        }
        for (int ii = win.first[ax]; ii <= win.last[ax]; ++ii) {
          c[ax] = ii;
          rec(ax + 1, wt * win.axis_weight[ax][ii - win.first[ax]]);
        }
      };
      rec(0, 1.0);
      double delta = is_inf(bp.r) ? mx : std::pow(acc / std::pow(2 * half, 2.0 * phi.n), 1.0 / bp.r);
      vals[i] = t.level[k].v[i] * delta;
    });
    nb.level_terms.push_back(weighted_lp_over_cells(vals, phi.cell_volume(), bp.p));
  }
  nb.total = nb.recompute(bp.q);
  return nb;
}

namespace {

double zero_term_seq(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp) {
  int count = cubes_per_level(phi.n, 0);
  std::vector<double> w(count), v(count);
  for (int i = 0; i < count; ++i) {
    DyadicCube c{phi.n, 0, cube_from_flat(phi.n, 0, i)};
    w[i] = ms.level[0][i];
    v[i] = lr_norm(phi, cube_as_box(c), bp.r).value;
  }
  return mass_lp(w, v, bp.p);
}

}  // namespace

NormBreakdown norm_seq(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp) {
  NormBreakdown nb;
  nb.variant = "seq";
  nb.zero_term = zero_term_seq(phi, ms, bp);
  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(phi.n, k);
    std::vector<double> v(count);
    parallel_for(count, [&](int i) {
      DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
      v[i] = delta_lr(phi, cube_as_box(c), bp.l, bp.r, OmegaMode::FullBox);
    });
    nb.level_terms.push_back(mass_lp(ms.level[k], v, bp.p));
  }
  nb.total = nb.recompute(bp.q);
  return nb;
}

NormBreakdown norm_variant(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp,
                           NormVariant which, int modulus_samples) {
  if (bp.c <= 1) throw std::invalid_argument("norm_variant: dilation must exceed 1");
  NormBreakdown nb;
  nb.variant = which == NormVariant::V2 ? "v2" : which == NormVariant::V3 ? "v3" : "v4";
  nb.zero_term = zero_term_seq(phi, ms, bp);
  int H = modulus_samples > 0 ? modulus_samples : (phi.n == 1 ? 64 : 8);
  double inv_r = is_inf(bp.r) ? 0.0 : 1.0 / bp.r;

  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(phi.n, k);
    std::vector<double> v(count);
    parallel_for(count, [&](int i) {
      DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
      Box big = cube_box(c, bp.c);
      switch (which) {
        case NormVariant::V2:
          v[i] = delta_lr(phi, big, bp.l, bp.r, OmegaMode::Cube);
          break;
        case NormVariant::V3: {
          LocalPoly p = best_poly(phi, big, bp.l, bp.r, DegreeMode::Total);
          v[i] = std::pow(2.0, k * phi.n * inv_r) * p.error;
          break;
        }
        case NormVariant::V4:
          v[i] = std::pow(2.0, k * phi.n * inv_r) * modulus(phi, big, bp.l, bp.r, H);
          break;
      }
    });
    nb.level_terms.push_back(mass_lp(ms.level[k], v, bp.p));
  }
  nb.total = nb.recompute(bp.q);
  return nb;
}

SNumbers spline_approx_numbers(const GridFunction& phi, const MultiSeq& ms,
                               const BesovParams& bp) {
  SNumbers out;
  out.s.push_back(zero_term_seq(phi, ms, bp));
  out.exact = (bp.p == 2.0 && bp.r == 2.0);

  for (int k = 0; k <= ms.K; ++k) {
    if (out.exact) {
      // weighted least squares over the level-k spline space
      SplineFn shape = zero_spline(phi.n, bp.l - 1, k);
      int nb = shape.coef_count();
      Eigen::SparseMatrix<double> G(nb, nb);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(nb);
      std::vector<Eigen::Triplet<double>> trip;
      double cv = phi.cell_volume();
      int deg = bp.l - 1;
      double scale = ipow2(k);

      std::vector<int> active(deg + 1);
      for (int i = 0; i < phi.cell_count(); ++i) {
        RVec x = phi.cell_center(i);
        IVec mk = owning_cube(phi.n, k, x);
        double w = std::pow(ms.at(k, mk), 2.0);
        // active univariate factors per axis
        double uw[kMaxDim][16];
        int base[kMaxDim];
        for (int ax = 0; ax < phi.n; ++ax) {
          double u = x[ax] * scale;
          base[ax] = static_cast<int>(std::floor(u)) - deg;
          for (int t = 0; t <= deg; ++t) uw[ax][t] = bspline_eval(deg, u - (base[ax] + t));
        }
        std::vector<std::pair<int, double>> act;
        IVec off{0, 0, 0};
        std::function<void(int, double)> rec = [&](int ax, double wt) {
          if (ax == phi.n) {
            IVec m;
            for (int t = 0; t < phi.n; ++t) m[t] = base[t] + off[t];
            int fl = shape.flat(m);
            if (fl >= 0 && wt != 0) act.push_back({fl, wt});
            return;
          }
          for (off[ax] = 0; off[ax] <= deg; ++off[ax]) rec(ax + 1, wt * uw[ax][off[ax]]);
        };
        rec(0, 1.0);
        for (auto& [fa, va] : act) {
          b(fa) += w * va * phi.v[i] * cv;
          for (auto& [fb, vb] : act) trip.push_back({fa, fb, w * va * vb * cv});
        }
      }
      G.setFromTriplets(trip.begin(), trip.end());
      for (int d = 0; d < nb; ++d) G.coeffRef(d, d) += 1e-12;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(G);
      Eigen::VectorXd coef = solver.solve(b);
      SplineFn S = shape;
      for (int d = 0; d < nb; ++d) S.c[d] = coef(d);

      GridFunction Sg = sample_spline(S, phi.K);
      int count = cubes_per_level(phi.n, k);
      std::vector<double> errs(count), wts(count);
      GridFunction diff = gf_sub(phi, Sg);
      for (int i = 0; i < count; ++i) {
        DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
        errs[i] = lr_norm(diff, cube_as_box(c), 2.0).value;
        wts[i] = ms.level[k][i];
      }
      out.s.push_back(mass_lp(wts, errs, 2.0));
    } else {
      SplineFn S = t_operator(phi, k, bp.l, bp.r);
      GridFunction Sg = sample_spline(S, phi.K);
      GridFunction diff = gf_sub(phi, Sg);
      int count = cubes_per_level(phi.n, k);
      std::vector<double> errs(count), wts(count);
      for (int i = 0; i < count; ++i) {
        DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
        errs[i] = lr_norm(diff, cube_as_box(c), bp.r).value;
        wts[i] = ms.level[k][i];
      }
      out.s.push_back(mass_lp(wts, errs, bp.p));
    }
  }
  return out;
}

std::vector<SplineFn> telescope_series(const GridFunction& phi, int K, int degree, double r) {
  std::vector<SplineFn> series;
  SplineFn prev;
  for (int k = 0; k <= K; ++k) {
    SplineFn Uk = t_operator(phi, k, degree + 1, r);
    if (k == 0) {
      series.push_back(Uk);
    } else {
      SplineFn up = refine(prev, k);
      SplineFn vk = Uk;
      for (size_t i = 0; i < vk.c.size(); ++i) vk.c[i] -= up.c[i];
      series.push_back(vk);
    }
    prev = Uk;
  }
  return series;
}

double level_coefficient_mass(const SplineFn& level_fn, const MultiSeq& ms, int k, double p) {
  int per = 1 << k;
  double acc = 0, mx = 0;
  for (int fl = 0; fl < level_fn.coef_count(); ++fl) {
    IVec m = level_fn.index_from_flat(fl);
    IVec cl;
    for (int i = 0; i < level_fn.n; ++i) cl[i] = std::clamp(m[i], 0, per - 1);
    double t = ms.at(k, cl);
    double a = std::fabs(level_fn.c[fl]);
    if (is_inf(p)) mx = std::max(mx, t * a);
    else acc += std::pow(t * a, p);
  }
  return is_inf(p) ? mx : std::pow(acc, 1.0 / p);
}

double coefficient_mass(const std::vector<SplineFn>& series, const MultiSeq& ms,
                        const BesovParams& bp) {
  std::vector<double> per_level;
  for (size_t k = 0; k < series.size(); ++k)
    per_level.push_back(level_coefficient_mass(series[k], ms, static_cast<int>(k), bp.p));
  return lp_aggregate(per_level, bp.q);
}

namespace {

// One pass of coordinate descent shifting mass between consecutive levels;
// the represented function is unchanged.
void refine_mass_pass(std::vector<SplineFn>& series, const MultiSeq& ms) {
  for (size_t k = 0; k + 1 < series.size(); ++k) {
    SplineFn& cur = series[k];
    SplineFn& nxt = series[k + 1];
    int deg = cur.degree;
    int per_k = 1 << cur.k;
    int per_j = 1 << nxt.k;
    std::vector<double> sub(deg + 2);
    for (int i = 0; i <= deg + 1; ++i) sub[i] = ipow2(-deg) * binomial(deg + 1, i);

    for (int fl = 0; fl < cur.coef_count(); ++fl) {
      IVec m = cur.index_from_flat(fl);
      IVec cl;
      for (int i = 0; i < cur.n; ++i) cl[i] = std::clamp(m[i], 0, per_k - 1);
      double wk = std::pow(ms.at(cur.k, cl), 2.0);

      // children rows
      double num = -wk * cur.c[fl];
      double den = wk;
      IVec off{0, 0, 0};
      std::function<void(int, double)> rec = [&](int ax, double rho) {
        if (ax == cur.n) {
          IVec mj;
          for (int i = 0; i < cur.n; ++i) mj[i] = 2 * m[i] + off[i];
          int fj = nxt.flat(mj);
          if (fj < 0) return;
          IVec cj;
          for (int i = 0; i < cur.n; ++i) cj[i] = std::clamp(mj[i], 0, per_j - 1);
          double wj = std::pow(ms.at(nxt.k, cj), 2.0);
          num += wj * nxt.c[fj] * rho;
          den += wj * rho * rho;
          return;
        }
        for (off[ax] = 0; off[ax] <= deg + 1; ++off[ax]) rec(ax + 1, rho * sub[off[ax]]);
      };
      rec(0, 1.0);
      if (den <= 0) continue;
      double delta = num / den;
      if (delta == 0) continue;
      cur.c[fl] += delta;
      std::function<void(int, double)> apply = [&](int ax, double rho) {
        if (ax == cur.n) {
          IVec mj;
          for (int i = 0; i < cur.n; ++i) mj[i] = 2 * m[i] + off[i];
          int fj = nxt.flat(mj);
          if (fj >= 0) nxt.c[fj] -= delta * rho;
          return;
        }
        for (off[ax] = 0; off[ax] <= deg + 1; ++off[ax]) apply(ax + 1, rho * sub[off[ax]]);
      };
      apply(0, 1.0);
    }
  }
}

}  // namespace

NFunctionals n_functionals(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp) {
  NFunctionals nf;
  SNumbers sn = spline_approx_numbers(phi, ms, bp);
  nf.s_minus1 = sn.s[0];
  nf.N1 = lp_aggregate(sn.s, bp.q);

  std::vector<double> n2_terms;
  for (int k = 0; k <= ms.K; ++k) {
    SplineFn T = t_operator(phi, k, bp.l, bp.r);
    GridFunction diff = gf_sub(phi, sample_spline(T, phi.K));
    int count = cubes_per_level(phi.n, k);
    std::vector<double> errs(count);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
      errs[i] = lr_norm(diff, cube_as_box(c), bp.r).value;
    }
    n2_terms.push_back(mass_lp(ms.level[k], errs, bp.p));
  }
  nf.N2 = lp_aggregate(n2_terms, bp.q) + nf.s_minus1;

  // degree-(l) telescoped series for the coefficient functionals
  std::vector<SplineFn> series = telescope_series(phi, ms.K, bp.l, bp.r);
  std::vector<double> n4_terms;
  {
    // alphas of the partial-sum splines U_k themselves
    SplineFn U = series[0];
    n4_terms.push_back(level_coefficient_mass(U, ms, 0, bp.p));
    for (int k = 1; k <= ms.K; ++k) {
      SplineFn Uk = refine(U, k);
      for (size_t i = 0; i < Uk.c.size(); ++i) Uk.c[i] += series[k].c[i];
      n4_terms.push_back(level_coefficient_mass(Uk, ms, k, bp.p));
      U = Uk;
    }
  }
  nf.N4 = lp_aggregate(n4_terms, bp.q);

  if (bp.p == 2.0 && bp.q == 2.0 && bp.r == 2.0) {
    std::vector<SplineFn> refined = series;
    for (int pass = 0; pass < 3; ++pass) refine_mass_pass(refined, ms);
    nf.N3 = std::min(coefficient_mass(series, ms, bp), coefficient_mass(refined, ms, bp));
  } else {
    nf.N3 = coefficient_mass(series, ms, bp);
  }
  return nf;
}

HardyResult hardy_check(const std::vector<double>& a, double q, double mu, double beta,
                        double lambda, HardyBranch branch) {
  if (mu > q) throw std::invalid_argument("hardy_check: mu must not exceed q");
  if (branch == HardyBranch::Tail && !(beta > 0))
    throw std::invalid_argument("hardy_check: tail branch needs beta > 0");
  if (branch == HardyBranch::Head && !(lambda > beta))
    throw std::invalid_argument("hardy_check: head branch needs lambda > beta");
  size_t K = a.size();
  std::vector<double> b(K, 0.0);
  for (size_t k = 0; k < K; ++k) {
    if (branch == HardyBranch::Tail) {
      double s = 0;
      for (size_t j = k; j < K; ++j) s += std::pow(std::fabs(a[j]), mu);
      b[k] = std::pow(s, 1.0 / mu);
    } else {
      double s = 0;
      for (size_t j = 0; j <= k; ++j)
        s += std::pow(2.0, j * mu * lambda) * std::pow(std::fabs(a[j]), mu);
      b[k] = std::pow(2.0, -static_cast<double>(k) * lambda) * std::pow(s, 1.0 / mu);
    }
  }
  auto side = [&](const std::vector<double>& x) {
    if (is_inf(q)) {
      double m = 0;
      for (size_t k = 0; k < K; ++k) m = std::max(m, std::pow(2.0, k * beta) * std::fabs(x[k]));
      return m;
    }
    double s = 0;
    for (size_t k = 0; k < K; ++k)
      s += std::pow(2.0, q * k * beta) * std::pow(std::fabs(x[k]), q);
    return std::pow(s, 1.0 / q);
  };
  HardyResult res;
  res.lhs = side(b);
  res.rhs = side(a);
  res.ratio = res.rhs > 0 ? res.lhs / res.rhs : 0.0;
  return res;
}

}  // namespace vs
