#include "varsmooth/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vs {

namespace {

struct LineFit {
  double slope = 0, intercept = 0, residual = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  size_t n = x.size();
  if (n == 0) return f;
  if (n == 1) {
    f.intercept = y[0];
    return f;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (size_t i = 0; i < n; ++i) {
    double e = y[i] - (f.slope * x[i] + f.intercept);
    f.residual = std::max(f.residual, std::fabs(e));
  }
  return f;
}

constexpr double kLogCCap = 9.965784284662087;  // log2(1000)

}  // namespace

void WeightSequence::validate() const {
  if (static_cast<int>(level.size()) != K_work + 1)
    throw std::runtime_error("WeightSequence: level count mismatch");
  for (const auto& g : level)
    for (double v : g.v)
      if (!(v > 0)) throw std::runtime_error("WeightSequence: non-positive sample");
}

void MultiSeq::validate() const {
  if (static_cast<int>(level.size()) != K + 1)
    throw std::runtime_error("MultiSeq: level count mismatch");
  for (int k = 0; k <= K; ++k) {
    if (static_cast<int>(level[k].size()) != cubes_per_level(n, k))
      throw std::runtime_error("MultiSeq: entry count mismatch");
    for (double v : level[k])
      if (!(v > 0) || !std::isfinite(v)) throw std::runtime_error("MultiSeq: non-positive entry");
  }
}

MultiSeq associate(const WeightSequence& t) {
  MultiSeq ms;
  ms.n = t.n;
  ms.p = t.p;
  ms.K = t.K_work;
  ms.level.resize(ms.K + 1);
  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(t.n, k);
    ms.level[k].resize(count);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{t.n, k, cube_from_flat(t.n, k, i)};
      ms.level[k][i] = lr_norm(t.level[k], cube_as_box(c), t.p).value;
    }
  }
  return ms;
}

WeightSequence bar_sequence(const MultiSeq& ms, int K_grid) {
  WeightSequence t;
  t.n = ms.n;
  t.p = ms.p;
  t.K_work = ms.K;
  t.level.resize(ms.K + 1);
  for (int k = 0; k <= ms.K; ++k) {
    double scale = is_inf(ms.p) ? 1.0 : std::pow(2.0, k * ms.n / ms.p);
    GridFunction g;
    g.n = ms.n;
    g.K = K_grid;
    g.v.resize(g.cell_count());
    for (int i = 0; i < g.cell_count(); ++i) {
      RVec x = g.cell_center(i);
      g.v[i] = scale * ms.level[k][cube_flat_index(ms.n, k, owning_cube(ms.n, k, x))];
    }
    t.level[k] = std::move(g);
  }
  return t;
}

namespace {

// (2^{kn} integral over Q_{k,m} of bar_j^sigma)^{1/sigma} computed on the
// multiple sequence; sigma may be +inf (sup) or negative exponents are passed
// via invert=true (integrand bar_j^{-sigma}).
double bar_level_moment(const MultiSeq& ms, int k, int flat_m, int j, double sigma, bool invert) {
  int n = ms.n;
  int g = j - k;
  double knp = is_inf(ms.p) ? 0.0 : static_cast<double>(ms.n) / ms.p;
  IVec mk = cube_from_flat(n, k, flat_m);
  // children of Q_{k,m} at level j: offsets in [0, 2^g)^n
  int childs = 1 << g;
  double acc = 0, mx = 0, mn = kInf;
  IVec off{0, 0, 0};
  std::function<void(int)> rec = [&](int ax) {
    if (ax == n) {
      IVec mj;
      for (int i = 0; i < n; ++i) mj[i] = (mk[i] << g) + off[i];
      double bar = std::pow(2.0, j * knp) * ms.at(j, mj);
      mx = std::max(mx, bar);
      mn = std::min(mn, bar);
      if (!is_inf(sigma)) {
        double b = invert ? 1.0 / bar : bar;
        acc += std::pow(b, sigma);
      }
      return;
    }
    for (off[ax] = 0; off[ax] < childs; ++off[ax]) rec(ax + 1);
  };
  rec(0);
  if (is_inf(sigma)) return invert ? 1.0 / mn : mx;
  // average over the 2^{gn} children = 2^{kn} * integral
  double avg = acc / std::pow(static_cast<double>(childs), n);
  return std::pow(avg, 1.0 / sigma);
}

double neighbor_log_ratio_max(const MultiSeq& ms) {
  double a3 = 0;
  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(ms.n, k);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{ms.n, k, cube_from_flat(ms.n, k, i)};
      for (const auto& nb : neighbors(c)) {
        double ratio = ms.at(k, c.m) / ms.at(k, nb.m);
        a3 = std::max(a3, std::fabs(std::log2(ratio)));
      }
    }
  }
  return a3;
}

}  // namespace

ClassReport check_X_class(const MultiSeq& ms, double p, double sigma1, double sigma2) {
  ClassReport rep;
  rep.sigma1 = sigma1;
  rep.sigma2 = sigma2;
  try {
    ms.validate();
    rep.positive = true;
  } catch (const std::exception&) {
    return rep;
  }
  double knp = is_inf(p) ? 0.0 : static_cast<double>(ms.n) / p;

  std::vector<double> gaps, L1, L2;
  for (int g = 0; g <= ms.K; ++g) {
    double worst1 = -kInf, worst2 = -kInf;
    for (int k = 0; k + g <= ms.K; ++k) {
      int j = k + g;
      int count = cubes_per_level(ms.n, k);
      for (int i = 0; i < count; ++i) {
        double Tk = std::pow(2.0, k * knp) * ms.level[k][i];
        double S2 = bar_level_moment(ms, k, i, j, sigma2, false);
        double S1 = bar_level_moment(ms, k, i, j, sigma1, true);
        worst2 = std::max(worst2, std::log2(S2 / Tk));
        worst1 = std::max(worst1, std::log2(Tk * S1));
      }
    }
    gaps.push_back(g);
    L1.push_back(worst1);
    L2.push_back(worst2);
  }

  LineFit f2 = least_squares(gaps, L2);
  rep.alpha2 = f2.slope;
  rep.fit_residual2 = f2.residual;
  double env2 = -kInf;
  for (size_t i = 0; i < gaps.size(); ++i) env2 = std::max(env2, L2[i] - rep.alpha2 * gaps[i]);
  rep.C2 = std::pow(2.0, env2);

  LineFit f1 = least_squares(gaps, L1);
  rep.alpha1 = -f1.slope;
  rep.fit_residual1 = f1.residual;
  double env1 = -kInf;
  for (size_t i = 0; i < gaps.size(); ++i) env1 = std::max(env1, L1[i] + rep.alpha1 * gaps[i]);
  rep.C1 = std::pow(2.0, env1);

  rep.alpha3 = neighbor_log_ratio_max(ms);
  rep.cond1 = std::log2(rep.C1) <= kLogCCap;
  rep.cond2 = std::log2(rep.C2) <= kLogCCap;
  rep.cond3 = std::isfinite(rep.alpha3);
  rep.verdict = rep.positive && rep.cond1 && rep.cond2 && rep.cond3;
  return rep;
}

ClassReport check_Y_class(const MultiSeq& ms, double p) {
  return check_X_class(ms, p, kInf, kInf);
}

AlocResult check_Aloc_p(const GridFunction& gamma, double p, double a) {
  if (p < 1) throw std::invalid_argument("check_Aloc_p: p must be >= 1");
  for (double v : gamma.v)
    if (!(v > 0)) throw std::runtime_error("check_Aloc_p: weight must be positive");
  AlocResult res;
  const double dil[3] = {1.0, 1.5, 2.0};
  for (int k = 0; k <= gamma.K; ++k) {
    int count = cubes_per_level(gamma.n, k);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{gamma.n, k, cube_from_flat(gamma.n, k, i)};
      for (double d : dil) {
        if (c.side() * d > a + 1e-12) continue;
        Box b = cube_box(c, d);
        // clipped cube measure
        double meas = 1;
        for (int ax = 0; ax < gamma.n; ++ax) {
          double lo = std::max(b.lo[ax], 0.0), hi = std::min(b.hi(ax), 1.0);
          meas *= std::max(hi - lo, 0.0);
        }
        if (meas <= 0) continue;
        double m1 = std::pow(lr_norm(gamma, b, 1.0).value, 1.0) / meas;  // average of gamma
        double val;
        if (p == 1.0) {
          // average / min over sampled cells in the cube
          CellWindow w = cell_window(gamma.n, gamma.K, b);
          double mn = kInf;
          IVec cc{0, 0, 0};
          std::function<void(int)> rec = [&](int ax) {
            if (ax == gamma.n) {
              mn = std::min(mn, gamma.at(cc));
              return;
            }
            for (int t = w.first[ax]; t <= w.last[ax]; ++t) {
              cc[ax] = t;
              rec(ax + 1);
            }
          };
          rec(0);
          val = m1 / mn;
        } else {
          double pp = p / (p - 1.0);  // dual exponent
          // (1/|Q| int gamma^{-p'/p})^{p/p'}
          double acc = 0;
          CellWindow w = cell_window(gamma.n, gamma.K, b);
          double cv = gamma.cell_volume();
          IVec cc{0, 0, 0};
          std::function<void(int, double)> rec = [&](int ax, double wt) {
            if (ax == gamma.n) {
              acc += std::pow(gamma.at(cc), -pp / p) * wt * cv;
              return;
            }
            for (int t = w.first[ax]; t <= w.last[ax]; ++t) {
              cc[ax] = t;
              rec(ax + 1, wt * w.axis_weight[ax][t - w.first[ax]]);
            }
          };
          rec(0, 1.0);
          val = m1 * std::pow(acc / meas, p / pp);
        }
        if (val > res.constant) {
          res.constant = val;
          res.worst_level = k;
          res.worst_index = c.m;
          res.worst_dilation = d;
        }
      }
    }
  }
  return res;
}

MultiSeq generate_from_weight(const FieldNd& gamma_p, int n, int d, double p, int K,
                              int inplane_oversample, int radial_points) {
  if (!(p > 0) || is_inf(p)) throw std::invalid_argument("generate_from_weight: p in (0,inf)");
  MultiSeq ms;
  ms.n = n;
  ms.p = p;
  ms.K = K;
  ms.level.resize(K + 1);

  int Kq = K + inplane_oversample;
  double h = ipow2(-Kq);
  int plane_cells = cubes_per_level(n, Kq);

  for (int k = 0; k <= K; ++k) {
    int count = cubes_per_level(n, k);
    ms.level[k].assign(count, 0.0);
    double r_out = ipow2(-k), r_in = ipow2(-k - 1);

    // radial quadrature nodes and weights over the annulus
    std::vector<std::array<double, kMaxDim>> ynodes;
    std::vector<double> yw;
    if (d == 1) {
      int M = radial_points;
      double step = (r_out - r_in) / M;
      for (int s = 0; s < 2; ++s) {
        double sign = s ? -1.0 : 1.0;
        for (int i = 0; i < M; ++i) {
          ynodes.push_back({sign * (r_in + (i + 0.5) * step), 0, 0});
          yw.push_back(step);
        }
      }
    } else {
      int M = std::max(radial_points, 8);
      double step = 2.0 * r_out / M;
      std::array<double, kMaxDim> y{0, 0, 0};
      std::function<void(int)> rec = [&](int ax) {
        if (ax == d) {
          double rad = 0;
          for (int i = 0; i < d; ++i) rad += y[i] * y[i];
          rad = std::sqrt(rad);
          if (rad >= r_in && rad < r_out) {
            ynodes.push_back(y);
            yw.push_back(std::pow(step, d));
          }
          return;
        }
        for (int i = 0; i < M; ++i) {
          y[ax] = -r_out + (i + 0.5) * step;
          rec(ax + 1);
        }
      };
      rec(0);
    }

    std::vector<double> acc(count, 0.0);
    for (int pc = 0; pc < plane_cells; ++pc) {
      IVec cell = cube_from_flat(n, Kq, pc);
      double coords[2 * kMaxDim];
      for (int i = 0; i < n; ++i) coords[i] = (cell[i] + 0.5) * h;
      // owning level-k cube
      IVec mk;
      for (int i = 0; i < n; ++i) mk[i] = cell[i] >> (Kq - k);
      int target = cube_flat_index(n, k, mk);
      double plane_w = std::pow(h, n);
      double cellsum = 0;
      for (size_t q = 0; q < ynodes.size(); ++q) {
        for (int i = 0; i < d; ++i) coords[n + i] = ynodes[q][i];
        double v = gamma_p(coords, n + d);
        if (!std::isfinite(v)) throw std::runtime_error("generate_from_weight: non-finite integrand");
        cellsum += v * yw[q];
      }
      acc[target] += cellsum * plane_w;
    }
    for (int i = 0; i < count; ++i) {
      if (!(acc[i] > 0)) throw std::runtime_error("generate_from_weight: vanishing shell mass");
      ms.level[k][i] = std::pow(acc[i], 1.0 / p);
    }
  }
  return ms;
}

DeltaExponents estimate_deltas(const MultiSeq& ms, double p, int d) {
  if (ms.K < 3) throw std::runtime_error("estimate_deltas: need at least 4 levels");
  DeltaExponents de;
  int n = ms.n;

  auto upow = [&](int k, int flat) { return std::pow(ms.level[k][flat], p); };

  std::vector<double> gaps, L1;
  for (int g = 1; g <= ms.K; ++g) {
    double worst = -kInf;
    for (int k = 0; k + g <= ms.K; ++k) {
      int j = k + g;
      int count = cubes_per_level(n, k);
      for (int i = 0; i < count; ++i) {
        IVec mk = cube_from_flat(n, k, i);
        int childs = 1 << g;
        double s = 0;
        IVec off{0, 0, 0};
        std::function<void(int)> rec = [&](int ax) {
          if (ax == n) {
            IVec mj;
            for (int t = 0; t < n; ++t) mj[t] = (mk[t] << g) + off[t];
            s += upow(j, cube_flat_index(n, j, mj));
            return;
          }
          for (off[ax] = 0; off[ax] < childs; ++off[ax]) rec(ax + 1);
        };
        rec(0);
        worst = std::max(worst, std::log2(s / upow(k, i)));
      }
    }
    gaps.push_back(g);
    L1.push_back(worst);
  }
  LineFit f1 = least_squares(gaps, L1);
  de.delta1 = -f1.slope / d;
  de.delta1_ambient = -f1.slope / (n + d);
  de.residual1 = f1.residual;

  // boundary-slab subfamilies: per gap, the worst face slab of level-j cubes
  std::vector<double> fr, L2;
  for (int g = 1; g <= ms.K; ++g) {
    double worst = -kInf;
    for (int k = 0; k + g <= ms.K; ++k) {
      int j = k + g;
      int count = cubes_per_level(n, k);
      int childs = 1 << g;
      for (int i = 0; i < count; ++i) {
        IVec mk = cube_from_flat(n, k, i);
        double total = 0;
        std::vector<double> face(2 * n, 0.0);
        IVec off{0, 0, 0};
        std::function<void(int)> rec = [&](int ax) {
          if (ax == n) {
            IVec mj;
            for (int t = 0; t < n; ++t) mj[t] = (mk[t] << g) + off[t];
            double u = upow(j, cube_flat_index(n, j, mj));
            total += u;
            for (int t = 0; t < n; ++t) {
              if (off[t] == 0) face[2 * t] += u;
              if (off[t] == childs - 1) face[2 * t + 1] += u;
            }
            return;
          }
          for (off[ax] = 0; off[ax] < childs; ++off[ax]) rec(ax + 1);
        };
        rec(0);
        for (double f : face)
          if (f > 0) worst = std::max(worst, std::log2(f / total));
      }
    }
    fr.push_back(-g);  // log2 of the slab measure fraction 2^{-g}
    L2.push_back(worst);
  }
  LineFit f2 = least_squares(fr, L2);
  de.delta2 = f2.slope;
  de.residual2 = f2.residual;

  de.delta3 = neighbor_log_ratio_max(ms);
  return de;
}

NontrivialReport check_nontrivial(const MultiSeq& ms, int l, double p, double q) {
  NontrivialReport rep;
  std::vector<double> terms;
  for (int k = 0; k <= ms.K; ++k) {
    double mass = 0;
    for (double t : ms.level[k]) mass += std::pow(t, p);
    double tau = std::pow(2.0, -static_cast<double>(k) * l * p) * mass;
    terms.push_back(is_inf(q) ? std::pow(tau, 1.0 / p) : std::pow(tau, q / p));
  }
  double total = 0;
  for (double t : terms) {
    total += t;
    rep.partial_sums.push_back(total);
  }
  if (terms.size() < 3) {
    rep.nontrivial = false;
    return rep;
  }
  // geometric extrapolation of the tail
  double rho = 0;
  int cnt = 0;
  for (size_t i = terms.size() - 3; i + 1 < terms.size(); ++i) {
    if (terms[i] > 0) {
      rho = std::max(rho, terms[i + 1] / terms[i]);
      ++cnt;
    }
  }
  if (cnt == 0 || rho >= 0.999) {
    rep.nontrivial = false;
    return rep;
  }
  double tail = terms.back() * rho / (1.0 - rho);
  rep.nontrivial = tail < 1e-8 * total;
  return rep;
}

void write_multiseq(const MultiSeq& ms, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_multiseq: cannot open " + path);
  f << "VSMS1\n";
  f << "n=" << ms.n << " p=" << format_g17(ms.p) << " K=" << ms.K << "\n";
  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(ms.n, k);
    for (int i = 0; i < count; ++i) {
      IVec m = cube_from_flat(ms.n, k, i);
      f << k;
      for (int ax = 0; ax < ms.n; ++ax) f << ' ' << m[ax];
      f << ' ' << format_g17(ms.level[k][i]) << "\n";
    }
  }
}

MultiSeq read_multiseq(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_multiseq: cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "VSMS1") throw std::runtime_error("read_multiseq: bad magic");
  std::string header;
  std::getline(f, header);
  MultiSeq ms;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) ms.n = std::stoi(tok.substr(2));
      else if (tok.rfind("p=", 0) == 0) ms.p = std::stod(tok.substr(2));
      else if (tok.rfind("K=", 0) == 0) ms.K = std::stoi(tok.substr(2));
    }
  }
  ms.level.resize(ms.K + 1);
  for (int k = 0; k <= ms.K; ++k) ms.level[k].assign(cubes_per_level(ms.n, k), 0.0);
  int k;
  while (f >> k) {
    IVec m{0, 0, 0};
    for (int ax = 0; ax < ms.n; ++ax) f >> m[ax];
    double v;
    f >> v;
    ms.at(k, m) = v;
  }
  ms.validate();
  return ms;
}

MultiSeq multiseq_constant_smoothness(int n, double p, int K, double s) {
  MultiSeq ms;
  ms.n = n;
  ms.p = p;
  ms.K = K;
  ms.level.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    double knp = is_inf(p) ? 0.0 : static_cast<double>(n) / p;
    double v = std::pow(2.0, k * (s - knp));
    ms.level[k].assign(cubes_per_level(n, k), v);
  }
  return ms;
}

MultiSeq multiseq_scale(const MultiSeq& a, const std::vector<double>& per_level) {
  MultiSeq out = a;
  for (int k = 0; k <= out.K; ++k)
    for (double& v : out.level[k]) v *= per_level[k];
  return out;
}

MultiSeq multiseq_pointwise_product(const MultiSeq& a, const MultiSeq& b) {
  if (a.n != b.n || a.K != b.K) throw std::invalid_argument("multiseq product: shape mismatch");
  MultiSeq out = a;
  for (int k = 0; k <= out.K; ++k)
    for (size_t i = 0; i < out.level[k].size(); ++i) out.level[k][i] *= b.level[k][i];
  return out;
}

}  // namespace vs
