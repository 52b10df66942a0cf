#include "varsmooth/suite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "varsmooth/atomic.hpp"
#include "varsmooth/norms.hpp"
#include "varsmooth/seqspace.hpp"
#include "varsmooth/testfamilies.hpp"
#include "varsmooth/traceext.hpp"

namespace vs {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- criterion 1
Outcome partition_of_unity() {
  Rng rng(11);
  double worst = 0;
  for (int degree = 0; degree <= 4; ++degree) {
    for (int k = 0; k <= 6; ++k) {
      SplineFn s = zero_spline(1, degree, k);
      for (double& c : s.c) c = 1.0;
      SplineFn s2 = zero_spline(2, degree, std::min(k, 4));
      for (double& c : s2.c) c = 1.0;
      for (int t = 0; t < 1000; ++t) {
        RVec x{rng.uniform(), rng.uniform(), 0};
        worst = std::max(worst, std::fabs(s.eval(x) - 1.0));
        if (t < 200) worst = std::max(worst, std::fabs(s2.eval(x) - 1.0));
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  std::ostringstream ss;
  ss << "max |sum-1| = " << worst << " (tol 1e-12)";
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 2
Outcome quasi_projection(bool quick) {
  Rng rng(22);
  double worst_proj = 0, worst_poly = 0;
  int reps = quick ? 10 : 50;
  for (int l = 1; l <= 4; ++l) {
    for (int k = 1; k <= (quick ? 2 : 4); ++k) {
      for (int t = 0; t < reps; ++t) {
        SplineFn s = random_spline(rng, 1, l - 1, k);
        QuasiCoeffs q = quasi_interpolant_of_spline(s);
        for (int i = 0; i < s.coef_count(); ++i)
          worst_proj = std::max(worst_proj, std::fabs(q.alpha[i] - s.c[i]));
      }
    }
    // 2-d projection, lighter
    for (int t = 0; t < (quick ? 2 : 8); ++t) {
      SplineFn s = random_spline(rng, 2, std::min(l - 1, 2), 2);
      QuasiCoeffs q = quasi_interpolant_of_spline(s);
      for (int i = 0; i < s.coef_count(); ++i)
        worst_proj = std::max(worst_proj, std::fabs(q.alpha[i] - s.c[i]));
    }
    // polynomial reproduction through the piecewise-field route
    for (int n = 1; n <= 2; ++n) {
      int K = n == 1 ? 6 : 5;
      int k = 2;
      for (int t = 0; t < (quick ? 2 : 6); ++t) {
        Field poly = random_polynomial_field(rng, n, l - 1);
        GridFunction g = sample(poly, n, K);
        SplineFn T = t_operator(g, k, l, 2.0);
        for (int c = 0; c < 300; ++c) {
          RVec x{rng.uniform(), rng.uniform(), 0};
          worst_poly = std::max(worst_poly, std::fabs(T.eval(x) - poly(x)));
        }
      }
    }
  }
  Outcome o;
  o.pass = worst_proj <= 1e-9 && worst_poly <= 1e-9;
  std::ostringstream ss;
  ss << "projection dev = " << worst_proj << ", poly reproduction dev = " << worst_poly
     << " (tol 1e-9)";
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 3
// random polynomial of total degree < l (order-l differences annihilate these
// along every direction)
Field random_total_degree_field(Rng& rng, int n, int l) {
  std::vector<std::pair<IVec, double>> terms;
  IVec nu{0, 0, 0};
  std::function<void(int, int)> rec = [&](int ax, int used) {
    if (ax == n) {
      terms.push_back({nu, rng.uniform(-1, 1)});
      return;
    }
    for (nu[ax] = 0; nu[ax] + used < l; ++nu[ax]) rec(ax + 1, used + nu[ax]);
    nu[ax] = 0;
  };
  rec(0, 0);
  return [terms, n](const RVec& x) {
    double acc = 0;
    for (const auto& [e, c] : terms) {
      double m = c;
      for (int i = 0; i < n; ++i) m *= std::pow(x[i], e[i]);
      acc += m;
    }
    return acc;
  };
}

Outcome difference_annihilation(bool quick) {
  Rng rng(33);
  double worst_diff = 0, worst_refine = 0;
  for (int l = 1; l <= 4; ++l) {
    for (int t = 0; t < (quick ? 5 : 20); ++t) {
      int n = (t % 2) + 1;
      int K = n == 1 ? 7 : 5;
      Field poly = random_total_degree_field(rng, n, l);
      GridFunction g = sample(poly, n, K);
      for (int rep = 0; rep < 30; ++rep) {
        IVec cell{0, 0, 0};
        IVec nu{0, 0, 0};
        bool ok = true;
        for (int ax = 0; ax < n; ++ax) {
          cell[ax] = rng.uniform_int(0, g.per_axis() - 1);
          nu[ax] = rng.uniform_int(-3, 3);
          int e = cell[ax] + l * nu[ax];
          if (e < 0 || e >= g.per_axis()) ok = false;
        }
        if (!ok) continue;
        double d = 0;
        for (int j = 0; j <= l; ++j) {
          IVec cc;
          for (int ax = 0; ax < n; ++ax) cc[ax] = cell[ax] + j * nu[ax];
          d += binomial(l, j) * (((l + j) % 2) ? -1.0 : 1.0) * g.at(cc);
        }
        worst_diff = std::max(worst_diff, std::fabs(d));
      }
    }
  }
  for (int degree = 0; degree <= 3; ++degree) {
    for (int t = 0; t < (quick ? 3 : 10); ++t) {
      SplineFn s = random_spline(rng, 1, degree, 2);
      SplineFn f = refine(s, 4);
      for (int c = 0; c < 1000; ++c) {
        RVec x{rng.uniform(), 0, 0};
        worst_refine = std::max(worst_refine, std::fabs(s.eval(x) - f.eval(x)));
      }
    }
    SplineFn s2 = random_spline(rng, 2, std::min(degree, 2), 1);
    SplineFn f2 = refine(s2, 3);
    for (int c = 0; c < 400; ++c) {
      RVec x{rng.uniform(), rng.uniform(), 0};
      worst_refine = std::max(worst_refine, std::fabs(s2.eval(x) - f2.eval(x)));
    }
  }
  Outcome o;
  o.pass = worst_diff <= 1e-10 && worst_refine <= 1e-12;
  std::ostringstream ss;
  ss << "annihilation dev = " << worst_diff << " (tol 1e-10), refine dev = " << worst_refine
     << " (tol 1e-12)";
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 4
struct WhitneyConstants {
  double mod_const = 0;  // two-sided constant for the modulus sandwich
  double app_const = 0;  // two-sided constant for the best-approximation sandwich
};

WhitneyConstants whitney_scan(uint64_t seed, int fns, int n, int K, int Kwork, int l, double r) {
  Rng rng(seed);
  double cmod = 1, capp = 1;
  int H = n == 1 ? 64 : 8;
  for (int f = 0; f < fns; ++f) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, n), n, K);
    double scale = lr_norm(g, unit_box(n), is_inf(r) ? kInf : r).value + 1e-12;
    for (int k = 0; k <= Kwork; ++k) {
      int count = cubes_per_level(n, k);
      for (int i = 0; i < count; ++i) {
        DyadicCube c{n, k, cube_from_flat(n, k, i)};
        Box b = cube_as_box(c);
        double del = delta_lr(g, b, l, r, OmegaMode::Cube);
        if (del <= 1e-9 * scale) continue;
        double volq = is_inf(r) ? 1.0 : std::pow(c.volume(), -1.0 / r);
        double om = volq * modulus(g, b, l, r, H);
        double El = volq * best_poly(g, b, l, r, DegreeMode::Total).error;
        double r1 = om / del, r2 = El / del;
        if (r1 > 0) cmod = std::max({cmod, r1, 1.0 / r1});
        if (r2 > 0) capp = std::max({capp, r2, 1.0 / r2});
      }
    }
  }
  return {cmod, capp};
}

Outcome whitney(bool quick) {
  struct Combo {
    int n, l;
    double r;
    int K, Kw;  // higher orders need more cells per cube to resolve
  };
  std::vector<Combo> combos = {{1, 1, 2, 7, 3}, {1, 2, 2, 7, 3}, {1, 3, 2, 8, 3},
                               {1, 2, 1, 7, 3}, {1, 2, kInf, 7, 3}, {1, 1, 1, 7, 3},
                               {2, 2, 2, 5, 1}};
  int fns = quick ? 20 : 200;
  double worst = 0, worst_drift = 0;
  std::ostringstream ss;
  bool pass = true;
  for (const auto& cb : combos) {
    int K = cb.K;
    int Kw = cb.Kw;
    WhitneyConstants wc = whitney_scan(44, fns, cb.n, K, Kw, cb.l, cb.r);
    double c = std::max(wc.mod_const, wc.app_const);
    worst = std::max(worst, c);
    // stability under one refinement step on a fixed sub-family
    int sub = quick ? 4 : (cb.n == 1 ? 40 : 10);
    WhitneyConstants a = whitney_scan(45, sub, cb.n, K, Kw, cb.l, cb.r);
    WhitneyConstants b = whitney_scan(45, sub, cb.n, K + 1, Kw, cb.l, cb.r);
    double drift = std::max(std::fabs(b.mod_const - a.mod_const) / a.mod_const,
                            std::fabs(b.app_const - a.app_const) / a.app_const);
    worst_drift = std::max(worst_drift, drift);
    if (c > 100.0 || drift >= 0.10) pass = false;
  }
  ss << "max two-sided constant = " << worst << " (cap 100), refinement drift = "
     << worst_drift << " (cap 10%)";
  return {pass, ss.str()};
}

// ---------------------------------------------------------------- criterion 5
Outcome equivalence(bool quick) {
  int K = 6, Kw = 3;
  int fns = quick ? 10 : 100;
  BesovParams bp;
  bp.l = 2;
  bp.p = bp.q = bp.r = 2;
  bp.c = 2.0;

  std::vector<MultiSeq> families;
  families.push_back(weight_constant(1, 2, Kw, 1.5));
  families.push_back(weight_power_generated(1, 1, 2, Kw, 1.5, 1.0));

  double worst_spread = 0, worst_drift = 0;

  // two-dimensional sample of the same pairwise comparison
  {
    MultiSeq ms2 = weight_constant(2, 2, 2, 1.5);
    Rng rng(54);
    double lo = kInf, hi = 0;
    for (int f = 0; f < (quick ? 2 : 8); ++f) {
      GridFunction g = sample(random_piecewise_smooth_field(rng, 2), 2, 5);
      double v1 = norm_seq(g, ms2, bp).total;
      double v2 = norm_variant(g, ms2, bp, NormVariant::V2).total;
      double v3 = norm_variant(g, ms2, bp, NormVariant::V3).total;
      double v4 = norm_variant(g, ms2, bp, NormVariant::V4).total;
      for (double a : {v1, v2, v3, v4})
        for (double b : {v1, v2, v3, v4})
          if (b > 0) {
            lo = std::min(lo, a / b);
            hi = std::max(hi, a / b);
          }
    }
    worst_spread = std::max(worst_spread, hi / lo);
  }

  for (const auto& ms : families) {
    double lo = kInf, hi = 0;
    Rng rng(55);
    for (int f = 0; f < fns; ++f) {
      GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, K);
      double v1 = norm_seq(g, ms, bp).total;
      double v2 = norm_variant(g, ms, bp, NormVariant::V2).total;
      double v3 = norm_variant(g, ms, bp, NormVariant::V3).total;
      double v4 = norm_variant(g, ms, bp, NormVariant::V4).total;
      for (double a : {v1, v2, v3, v4})
        for (double b : {v1, v2, v3, v4})
          if (b > 0) {
            lo = std::min(lo, a / b);
            hi = std::max(hi, a / b);
          }
    }
    worst_spread = std::max(worst_spread, hi / lo);

    // stability of the spread constant under refinement
    auto spread_at = [&](int KK, int cnt) {
      Rng r2(56);
      double l2 = kInf, h2 = 0;
      for (int f = 0; f < cnt; ++f) {
        GridFunction g = sample(random_piecewise_smooth_field(r2, 1), 1, KK);
        double v1 = norm_seq(g, ms, bp).total;
        double v2 = norm_variant(g, ms, bp, NormVariant::V2).total;
        double v3 = norm_variant(g, ms, bp, NormVariant::V3).total;
        double v4 = norm_variant(g, ms, bp, NormVariant::V4).total;
        for (double a : {v1, v2, v3, v4})
          for (double b : {v1, v2, v3, v4})
            if (b > 0) {
              l2 = std::min(l2, a / b);
              h2 = std::max(h2, a / b);
            }
      }
      return h2 / l2;
    };
    int cnt = quick ? 5 : 30;
    double sA = spread_at(K, cnt), sB = spread_at(K + 1, cnt);
    worst_drift = std::max(worst_drift, std::fabs(sB - sA) / sA);
  }
  Outcome o;
  o.pass = worst_spread <= 1e3 && worst_drift < 0.10;
  std::ostringstream ss;
  ss << "pairwise ratio spread = " << worst_spread << " (cap 1e3), drift = " << worst_drift;
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 6
Outcome atomic_roundtrip(bool quick) {
  Rng rng(66);
  int K = 7, Kw = 4;
  BesovParams bp;
  bp.l = 2;
  bp.p = bp.q = bp.r = 2;
  MultiSeq ms = weight_constant(1, 2, Kw, 1.2);

  // spline-valued round trip
  double worst_rt = 0;
  for (int t = 0; t < (quick ? 2 : 6); ++t) {
    SplineFn s = random_spline(rng, 1, bp.l, 1);
    GridFunction g = sample_spline(s, K);
    DecomposeReport rep = decompose(g, ms, bp);
    worst_rt = std::max(worst_rt, rep.recon_error);
  }

  // truncation slope for a smooth bump, fitted over the refinement regime
  Field bumpf = [](const RVec& x) {
    return std::exp(-30.0 * (x[0] - 0.45) * (x[0] - 0.45));
  };
  int Kslope = 8, Kwslope = 5;
  MultiSeq ms_slope = weight_constant(1, 2, Kwslope, 1.2);
  GridFunction g = sample(bumpf, 1, Kslope);
  DecomposeReport rep = decompose(g, ms_slope, bp);
  std::vector<double> xs, ys;
  for (int J = 1; J <= Kwslope; ++J) {
    GridFunction rec = reconstruct(rep.series, J, Kslope);
    double e = lr_norm(gf_sub(g, rec), unit_box(1), bp.r).value;
    if (e > 1e-10) {
      xs.push_back(J);
      ys.push_back(std::log2(e));
    }
  }
  double slope = fit_slope(xs, ys);

  // coefficient-mass chain over the family
  int fns = quick ? 10 : 100;
  Rng rng2(67);
  double C = 0, Cp = 0;
  bool chain_ok = true;
  for (int f = 0; f < fns; ++f) {
    GridFunction h = sample(random_smooth_field(rng2, 1), 1, K);
    NFunctionals nf = n_functionals(h, ms, bp);
    double norm = norm_seq(h, ms, bp).total;
    if (!(nf.N3 <= nf.N4 * (1 + 1e-9))) chain_ok = false;
    if (norm > 0) C = std::max(C, nf.N4 / norm);
    if (nf.N3 > 0) Cp = std::max(Cp, norm / nf.N3);
  }

  Outcome o;
  o.pass = worst_rt <= 1e-6 && slope <= -(bp.l + 1) + 0.5 && chain_ok && std::isfinite(C) &&
           std::isfinite(Cp);
  std::ostringstream ss;
  ss << "round trip = " << worst_rt << " (tol 1e-6), slope = " << slope << " (cap "
     << -(bp.l + 1) + 0.5 << "), chain C = " << C << ", C' = " << Cp
     << (chain_ok ? "" : " [chain order violated]");
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 7
Outcome hardy(bool quick) {
  int seqs = quick ? 100 : 1000;
  double worst_drift = 0, worst_c = 0;
  bool all_finite = true;
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double mu : {0.5, 1.0}) {
      for (double q : {1.0, 2.0, kInf}) {
        for (HardyBranch br : {HardyBranch::Tail, HardyBranch::Head}) {
          auto fitted = [&](int len, uint64_t seed) {
            Rng rng(seed);
            double c = 0;
            for (int t = 0; t < seqs; ++t) {
              std::vector<double> a(len);
              double decay = rng.uniform(0.2, 1.5);
              for (int k2 = 0; k2 < len; ++k2)
                a[k2] = rng.uniform(-1, 1) * std::pow(2.0, -decay * k2 * beta - 0.3 * k2);
              HardyResult hr = hardy_check(a, q, mu, beta, beta + 1.0, br);
              if (!std::isfinite(hr.ratio)) all_finite = false;
              c = std::max(c, hr.ratio);
            }
            return c;
          };
          double c40 = fitted(40, 77);
          double c80 = fitted(80, 77);
          worst_c = std::max(worst_c, c80);
          if (c40 > 0) worst_drift = std::max(worst_drift, std::fabs(c80 - c40) / c40);
        }
      }
    }
  }
  Outcome o;
  o.pass = all_finite && std::isfinite(worst_c) && worst_drift < 0.10;
  std::ostringstream ss;
  ss << "fitted C = " << worst_c << ", length-doubling drift = " << worst_drift
     << (all_finite ? "" : " [non-finite ratio]");
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 8
Outcome embedding_oracle(bool quick) {
  int pairs = quick ? 20 : 100;
  Rng rng(88);
  int disagreements = 0;
  double worst_fin = 0, worst_inf = kInf;
  const double expos[5] = {0.5, 1, 2, kInf, 1.5};
  for (int t = 0; t < pairs; ++t) {
    int J = 12, M = 64;
    bool make_finite = (t % 2) == 0;
    double b = make_finite ? rng.uniform(0.8, 2.0) : -rng.uniform(1.0, 2.0);
    double e = rng.uniform(0.0, 0.5);

    // inner exponents ordered so the inner factor stays bounded (p* = inf);
    // the level decay/growth rate b alone decides the verdict
    double pa = expos[t % 3], pb = expos[(t + 1) % 3];
    double p1 = std::min(pa, pb), p2 = std::max(pa, pb);
    double q1 = expos[(t / 3) % 3], q2 = expos[(t / 2) % 3];
    auto make = [&](int JJ, int MM) {
      SeqSpace s1, s2;
      s1.p = p1;
      s1.q = q1;
      s2.p = p2;
      s2.q = q2;
      for (int j = 1; j <= JJ; ++j) {
        s1.beta.push_back(1.0);
        s2.beta.push_back(std::pow(2.0, -b * j));
        std::vector<double> w1(MM), w2(MM);
        for (int m = 0; m < MM; ++m) {
          w1[m] = 1.0;
          w2[m] = std::pow(1.0 + m, -e);
        }
        s1.w.push_back(w1);
        s2.w.push_back(w2);
      }
      return std::pair<SeqSpace, SeqSpace>(s1, s2);
    };

    auto [sA1, sA2] = make(J, M);
    EmbeddingReport rep = embedding_criterion(sA1, sA2);
    double nA = brute_force_operator_norm(sA1, sA2, 200, 1000 + t);
    auto [sB1, sB2] = make(2 * J, 2 * M);
    double nB = brute_force_operator_norm(sB1, sB2, 200, 2000 + t);
    double growth = nB / nA;

    if (rep.continuous) {
      worst_fin = std::max(worst_fin, growth);
      if (!(growth < 1.2)) ++disagreements;
    } else {
      worst_inf = std::min(worst_inf, growth);
      if (!(growth >= 10.0)) ++disagreements;
    }
    if (rep.continuous != make_finite) ++disagreements;
  }
  Outcome o;
  o.pass = disagreements == 0;
  std::ostringstream ss;
  ss << "disagreements = " << disagreements << ", finite-pair growth <= " << worst_fin
     << ", infinite-pair growth >= " << worst_inf;
  o.detail = ss.str();
  return o;
}

// ---------------------------------------------------------------- criterion 9
Outcome trace_extension(bool quick) {
  Rng rng(99);
  int series_count = quick ? 10 : 50;
  PlaneSpec ps{2, 1};
  BesovParams bp;
  bp.p = bp.q = 2;

  MultiSeq ms2 = weight_constant(2, 2, 3, 1.0);
  MultiSeq ms1 = trace_multiseq(ms2, 1);

  double worst_id = 0, trace_C = 0, ext_C = 0;
  for (int t = 0; t < series_count; ++t) {
    int degree = rng.uniform_int(1, 3);
    SplineSeries s;
    s.n = 2;
    s.degree = degree;
    for (int k = 0; k <= 3; ++k) {
      double amp = std::pow(2.0, -1.0 * k);
      s.levels.push_back(random_spline(rng, 2, degree, k, amp));
    }
    SplineSeries tr = besov_trace(s, ps);
    // trace mass vs full mass
    auto mass = [&](const SplineSeries& ser, const MultiSeq& w) {
      std::vector<double> lv;
      for (int k = 0; k <= ser.K(); ++k)
        lv.push_back(level_coefficient_mass(ser.levels[k], w, k, bp.p));
      return lp_aggregate(lv, bp.q);
    };
    double m_full = mass(s, ms2), m_tr = mass(tr, ms1);
    if (m_full > 0) trace_C = std::max(trace_C, m_tr / m_full);

    // extension from a random plane series
    SplineSeries sp;
    sp.n = 1;
    sp.degree = degree;
    for (int k = 0; k <= 3; ++k)
      sp.levels.push_back(random_spline(rng, 1, degree, k, std::pow(2.0, -1.0 * k)));
    SplineSeries ext = besov_extend(sp, ps);
    SplineSeries back = besov_trace(ext, ps);
    for (int k = 0; k <= 3; ++k)
      for (int i = 0; i < sp.levels[k].coef_count(); ++i)
        worst_id = std::max(worst_id,
                            std::fabs(back.levels[k].c[i] - sp.levels[k].c[i]));
    double m_pl = mass(sp, ms1), m_ext = mass(ext, ms2);
    if (m_pl > 0) ext_C = std::max(ext_C, m_ext / m_pl);
  }
  Outcome o;
  o.pass = worst_id <= 1e-12 && std::isfinite(trace_C) && std::isfinite(ext_C) && trace_C > 0 &&
           ext_C > 0;
  std::ostringstream ss;
  ss << "trace-extend identity dev = " << worst_id << " (tol 1e-12), trace mass C = " << trace_C
     << ", extension mass C = " << ext_C;
  o.detail = ss.str();
  return o;
}

// --------------------------------------------------------------- criterion 10
Outcome averaging_machinery(bool quick) {
  Rng rng(1010);
  int K = 7;
  double worst_rep = 0;
  for (int l = 1; l <= 4; ++l) {
    AveragingOp ao = make_averaging_op(l);
    for (int t = 0; t < (quick ? 2 : 5); ++t) {
      Field poly = random_polynomial_field(rng, 1, l - 1);
      GridFunction g = sample(poly, 1, K);
      double eps = ipow2(-3);
      GridFunction Eg = steklov_average(g, eps, ao);
      int margin = static_cast<int>(std::ceil(2.0 * l * eps / g.cell_size()));
      for (int i = margin; i < g.per_axis() - margin; ++i)
        worst_rep = std::max(worst_rep, std::fabs(Eg.v[i] - g.v[i]));
    }
  }

  // recovery monotonicity
  int fails_mono = 0;
  {
    AveragingOp ao = make_averaging_op(2);
    Rng r2(1011);
    for (int t = 0; t < (quick ? 4 : 20); ++t) {
      GridFunction g = sample(random_piecewise_smooth_field(r2, 1), 1, K);
      double prev = kInf;
      bool mono = true;
      for (int e = 3; e <= K - 1; ++e) {
        GridFunction Eg = steklov_average(g, ipow2(-e), ao);
        double err = lr_norm(gf_sub(g, Eg), unit_box(1), 1.0).value;
        if (err >= prev) mono = false;
        prev = err;
      }
      if (!mono) ++fails_mono;
    }
  }

  // derivative bound with one fitted constant
  double fitted_C = 0;
  {
    int l = 2;
    AveragingOp ao = make_averaging_op(l);
    Rng r3(1012);
    for (int t = 0; t < (quick ? 2 : 8); ++t) {
      GridFunction g = sample(random_smooth_field(r3, 1), 1, K);
      for (int e = 3; e <= 4; ++e) {
        double eps = ipow2(-e);
        GridFunction Eg = steklov_average(g, eps, ao);
        double h = g.cell_size();
        int margin = static_cast<int>(std::ceil((2.0 * l * eps) / h)) + l;
        for (int i = margin; i < g.per_axis() - margin; i += 3) {
          // l-th central difference of the smoothed function
          double d2 = (Eg.v[i + 1] - 2 * Eg.v[i] + Eg.v[i - 1]) / (h * h);
          RVec x = g.cell_center(i);
          Box w;
          w.n = 1;
          w.lo[0] = x[0] - eps;
          w.side[0] = 2 * eps;
          double rhs = delta_lr(g, w, l, 1.0, OmegaMode::FullBox) / std::pow(eps, l);
          if (rhs > 1e-12) fitted_C = std::max(fitted_C, std::fabs(d2) / rhs);
        }
      }
    }
  }

  // two-sided energy/norm ratio on the slab
  double spread = 0;
  {
    int l = 2, Kf = 6, Kw = 3;
    AveragingOp ao = make_averaging_op(l);
    BesovParams bp;
    bp.l = l;
    bp.p = 2;
    bp.q = 2;
    bp.r = 1;
    std::vector<FieldNd> gammas = {gamma_p_ones(),
                                   [](const double* c, int dim) {
                                     return std::pow(std::fabs(c[dim - 1]), 0.5);
                                   }};
    for (const auto& gp : gammas) {
      MultiSeq gh = generate_from_weight(gp, 1, 1, 2.0, Kw);
      MultiSeq ms = gh;
      for (int k = 0; k <= Kw; ++k) {
        double f = std::pow(2.0, k * l);
        for (double& v : ms.level[k]) v *= f;
      }
      Rng r4(1013);
      double lo = kInf, hi = 0;
      int fns = quick ? 4 : 20;
      for (int t = 0; t < fns; ++t) {
        GridFunction g = sample(random_smooth_field(r4, 1), 1, Kf);
        SlabFn f = sobolev_extend(g, l, 5, ao, 5);
        FieldNd gamma_ptw = [&gp](const double* c, int dim) {
          return std::pow(gp(c, dim), 0.5);  // gamma = (gamma^p)^{1/p}, p = 2
        };
        double energy = slab_energy(f, gamma_ptw, l, bp.p);
        double nrm = norm_seq(g, ms, bp).total;
        if (nrm > 0 && energy > 0) {
          lo = std::min(lo, energy / nrm);
          hi = std::max(hi, energy / nrm);
        }
      }
      spread = std::max(spread, hi / lo);
    }
  }

  Outcome o;
  o.pass = worst_rep <= 1e-8 && fails_mono == 0 && std::isfinite(fitted_C) && spread <= 1e3;
  std::ostringstream ss;
  ss << "poly reproduction dev = " << worst_rep << " (tol 1e-8), recovery monotone fails = "
     << fails_mono << ", derivative-bound C = " << fitted_C << ", energy ratio spread = "
     << spread << " (cap 1e3)";
  o.detail = ss.str();
  return o;
}

// --------------------------------------------------------------- criterion 11
Outcome weight_diagnostics(bool quick) {
  (void)quick;
  double worst_dev = 0;
  for (double beta : {0.5, 1.0, 2.0}) {
    MultiSeq gh = generate_from_weight(gamma_p_first_axis_power(beta), 1, 1, 2.0, 5);
    DeltaExponents de = estimate_deltas(gh, 2.0, 1);
    worst_dev = std::max(worst_dev, std::fabs(de.delta1_ambient - 0.5));
  }

  // separation between the integral-form and sup-form growth exponents
  int l = 2;
  double p = 2.0, eps = 0.2;
  MultiSeq gh = generate_from_weight(gamma_p_product_power(-(1.0 - eps)), 1, 1, p, 5, 5, 64);
  MultiSeq t = gh;
  for (int k = 0; k <= t.K; ++k) {
    double f = std::pow(2.0, k * l);
    for (double& v : t.level[k]) v *= f;
  }
  ClassReport x = check_X_class(t, p, kInf, p);
  ClassReport y = check_Y_class(t, p);

  Outcome o;
  bool sep = x.alpha2 < l && y.alpha2 >= l;
  o.pass = worst_dev <= 0.1 && sep;
  std::ostringstream ss;
  ss << "ambient-normalized decay dev = " << worst_dev << " (tol 0.1), integral-form alpha2 = "
     << x.alpha2 << " < " << l << " vs sup-form alpha2 = " << y.alpha2 << " >= " << l
     << (sep ? "" : " [separation failed]");
  o.detail = ss.str();
  return o;
}

}  // namespace

int run_acceptance_suite(std::ostream& os, const SuiteOptions& opt) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> entries = {
      {"partition of unity", [&] { return partition_of_unity(); }},
      {"quasi-interpolant projection + polynomial reproduction",
       [&] { return quasi_projection(opt.quick); }},
      {"difference annihilation + refinement invariance",
       [&] { return difference_annihilation(opt.quick); }},
      {"two-sided local sandwiches", [&] { return whitney(opt.quick); }},
      {"norm-variant equivalence", [&] { return equivalence(opt.quick); }},
      {"atomic decomposition round trip + mass chain",
       [&] { return atomic_roundtrip(opt.quick); }},
      {"weighted sequence inequality", [&] { return hardy(opt.quick); }},
      {"embedding criterion vs operator-norm oracle",
       [&] { return embedding_oracle(opt.quick); }},
      {"plane trace and extension", [&] { return trace_extension(opt.quick); }},
      {"averaging and slab extension machinery",
       [&] { return averaging_machinery(opt.quick); }},
      {"weight-class diagnostics", [&] { return weight_diagnostics(opt.quick); }},
  };

  int failures = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    Outcome oc = entries[i].second();
    os << "[" << std::setw(2) << (i + 1) << "] " << (oc.pass ? "PASS" : "FAIL") << " "
       << entries[i].first << ": " << oc.detail << "\n";
    os.flush();
    if (!oc.pass) ++failures;
  }
  os << (failures == 0 ? "all criteria passed" : "criteria failed") << " (" << entries.size() - failures
     << "/" << entries.size() << ")\n";
  return failures;
}

}  // namespace vs
