#include "varsmooth/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vs {

double gate_sigma1(double p, double theta) {
  if (is_inf(p)) return 1.0;  // p_theta = inf, dual 1
  double pt = p / theta;
  if (pt <= 1.0 + 1e-12) return kInf;  // dual exponent infinite
  return theta * pt / (pt - 1.0);
}

DecomposeReport decompose(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp) {
  DecomposeReport rep;
  double theta = std::min({1.0, bp.p, bp.r});
  double s1 = gate_sigma1(bp.p, theta);
  rep.gate = check_X_class(ms, bp.p, s1, bp.p);
  double need = phi.n * (1.0 / theta - (is_inf(bp.r) ? 0.0 : 1.0 / bp.r));
  bool a_ok = rep.gate.alpha1 > need;
  bool l_ok = bp.l > rep.gate.alpha2;
  rep.gate_ok = rep.gate.verdict && a_ok && l_ok;
  if (!rep.gate_ok) {
    std::ostringstream os;
    os << "class gate warning:";
    if (!rep.gate.verdict) os << " conditions failed";
    if (!a_ok) os << " alpha1=" << rep.gate.alpha1 << " <= " << need;
    if (!l_ok) os << " l=" << bp.l << " <= alpha2=" << rep.gate.alpha2;
    rep.gate_message = os.str();
  }

  rep.series.n = phi.n;
  rep.series.degree = bp.l;
  rep.series.source_r = bp.r;
  rep.series.levels = telescope_series(phi, ms.K, bp.l, bp.r);

  for (int k = 0; k <= ms.K; ++k)
    rep.level_masses.push_back(level_coefficient_mass(rep.series.levels[k], ms, k, bp.p));

  GridFunction recon = reconstruct(rep.series, ms.K, phi.K);
  rep.recon_error = lr_norm(gf_sub(phi, recon), unit_box(phi.n), bp.r).value;
  return rep;
}

GridFunction reconstruct(const SplineSeries& s, int up_to_level, int K_max) {
  GridFunction g;
  g.n = s.n;
  g.K = K_max;
  g.v.assign(g.cell_count(), 0.0);
  int J = std::min(up_to_level, s.K());
  parallel_for(g.cell_count(), [&](int i) {
    RVec x = g.cell_center(i);
    double acc = 0;
    for (int k = 0; k <= J; ++k) acc += s.levels[k].eval(x);
    g.v[i] = acc;
  });
  return g;
}

SeriesBoundReport series_norm_bound(const SplineSeries& s, const MultiSeq& ms,
                                    const BesovParams& bp, double theta) {
  SeriesBoundReport rep;
  int K = std::min(s.K(), ms.K);
  int Keval = std::max(6, K + 2);
  if (s.n == 2) Keval = std::min(Keval, 6);

  // sampled partial sums
  std::vector<GridFunction> partial(K + 1);
  GridFunction acc;
  acc.n = s.n;
  acc.K = Keval;
  acc.v.assign(acc.cell_count(), 0.0);
  for (int k = 0; k <= K; ++k) {
    GridFunction vk = sample_spline(s.levels[k], Keval);
    for (int i = 0; i < acc.cell_count(); ++i) acc.v[i] += vk.v[i];
    partial[k] = acc;
  }
  const GridFunction& phi = partial[K];

  double inv_r = is_inf(bp.r) ? 0.0 : 1.0 / bp.r;
  double inv_th = 1.0 / theta;

  std::vector<double> lhs_terms, rhs_terms;
  for (int k = 0; k <= K; ++k) {
    int count = cubes_per_level(s.n, k);
    std::vector<double> le(count), re(count), w(count);
    GridFunction dk = gf_sub(phi, partial[k]);
    GridFunction vk = sample_spline(s.levels[k], Keval);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{s.n, k, cube_from_flat(s.n, k, i)};
      Box b = cube_as_box(c);
      le[i] = std::pow(2.0, k * s.n * inv_r) * lr_norm(dk, b, bp.r).value;
      re[i] = std::pow(2.0, k * s.n * inv_th) * lr_norm(vk, b, bp.r).value;
      w[i] = ms.level[k][i];
    }
    auto mass = [&](const std::vector<double>& v) {
      double acc2 = 0, mx = 0;
      for (int i = 0; i < count; ++i) {
        double t = w[i] * v[i];
        if (is_inf(bp.p)) mx = std::max(mx, t);
        else acc2 += std::pow(t, bp.p);
      }
      return is_inf(bp.p) ? mx : std::pow(acc2, 1.0 / bp.p);
    };
    lhs_terms.push_back(mass(le));
    rhs_terms.push_back(mass(re));
  }
  double zero = 0;
  {
    int count = cubes_per_level(s.n, 0);
    double acc2 = 0, mx = 0;
    for (int i = 0; i < count; ++i) {
      DyadicCube c{s.n, 0, cube_from_flat(s.n, 0, i)};
      double t = ms.level[0][i] * lr_norm(phi, cube_as_box(c), bp.r).value;
      if (is_inf(bp.p)) mx = std::max(mx, t);
      else acc2 += std::pow(t, bp.p);
    }
    zero = is_inf(bp.p) ? mx : std::pow(acc2, 1.0 / bp.p);
  }
  rep.lhs = lp_aggregate(lhs_terms, bp.q) + zero;
  rep.rhs = lp_aggregate(rhs_terms, bp.q);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

LevelIneqReport level_inequality_check(const GridFunction& phi, const MultiSeq& ms,
                                       const BesovParams& bp, LevelIneqMode mode,
                                       double alpha2, const DeltaExponents* de, int annulus_d) {
  LevelIneqReport rep;
  double mu = std::min({1.0, bp.r, bp.p});

  double expo;
  BesovParams sbp = bp;
  if (mode == LevelIneqMode::GammaGenerated) {
    if (!de) throw std::invalid_argument("level_inequality_check: delta exponents required");
    double lam = std::min(static_cast<double>(bp.l),
                          bp.l - 1.0 + de->delta2 / bp.p);
    expo = lam + annulus_d * de->delta1 / bp.p - alpha2;
    // spline numbers with degree l-1 atoms
  } else {
    expo = bp.l - alpha2;
    sbp.l = bp.l + 1;  // degree-l atoms on the right
  }
  rep.exponent = expo;

  SNumbers sn = spline_approx_numbers(phi, ms, sbp);

  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(phi.n, k);
    std::vector<double> v(count);
    parallel_for(count, [&](int i) {
      DyadicCube c{phi.n, k, cube_from_flat(phi.n, k, i)};
      v[i] = delta_lr(phi, cube_as_box(c), bp.l, bp.r, OmegaMode::FullBox);
    });
    double lhs;
    {
      double acc = 0, mx = 0;
      for (int i = 0; i < count; ++i) {
        double t = ms.level[k][i] * v[i];
        if (is_inf(bp.p)) mx = std::max(mx, t);
        else acc += std::pow(t, bp.p);
      }
      lhs = is_inf(bp.p) ? mx : std::pow(acc, 1.0 / bp.p);
    }
    double rhs = 0;
    for (int j = -1; j <= k; ++j)
      rhs += std::pow(2.0, j * mu * expo) * std::pow(sn.value(j), mu);
    rhs = std::pow(2.0, -k * expo) * std::pow(rhs, 1.0 / mu);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    double ratio = rhs > 0 ? lhs / rhs : 0.0;
    rep.ratio.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

void write_series(const SplineSeries& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_series: cannot open " + path);
  f << "VSSS1\n";
  f << "n=" << s.n << " degree=" << s.degree << " K=" << s.K() << "\n";
  for (int k = 0; k <= s.K(); ++k) {
    const SplineFn& L = s.levels[k];
    for (int fl = 0; fl < L.coef_count(); ++fl) {
      if (L.c[fl] == 0) continue;
      IVec m = L.index_from_flat(fl);
      f << k;
      for (int ax = 0; ax < s.n; ++ax) f << ' ' << m[ax];
      f << ' ' << format_g17(L.c[fl]) << "\n";
    }
  }
}

SplineSeries read_series(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_series: cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "VSSS1") throw std::runtime_error("read_series: bad magic");
  std::string header;
  std::getline(f, header);
  SplineSeries s;
  int K = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) s.n = std::stoi(tok.substr(2));
      else if (tok.rfind("degree=", 0) == 0) s.degree = std::stoi(tok.substr(7));
      else if (tok.rfind("K=", 0) == 0) K = std::stoi(tok.substr(2));
    }
  }
  if (K < 0) throw std::runtime_error("read_series: bad header");
  for (int k = 0; k <= K; ++k) s.levels.push_back(zero_spline(s.n, s.degree, k));
  int k;
  while (f >> k) {
    IVec m{0, 0, 0};
    for (int ax = 0; ax < s.n; ++ax) f >> m[ax];
    double v;
    f >> v;
    if (k < 0 || k > K) throw std::runtime_error("read_series: level out of range");
    s.levels[k].set_coeff(m, v);
  }
  return s;
}

}  // namespace vs
