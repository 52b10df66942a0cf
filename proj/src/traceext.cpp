#include "varsmooth/traceext.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vs {

namespace {

double bump(double u) {
  double s = 1.0 - u * u;
  return s > 0 ? std::exp(-1.0 / s) : 0.0;
}

// integral of bump over [-1,1] (computed once)
double bump_mass() {
  static double m = [] {
    int N = 40000;
    double h = 2.0 / N, acc = 0;
    for (int i = 0; i < N; ++i) acc += bump(-1.0 + (i + 0.5) * h) * h;
    return acc;
  }();
  return m;
}

double smooth_step_raw(double s) { return (s > 0 && s < 1) ? std::exp(-1.0 / (s * (1.0 - s))) : 0.0; }

// smooth transition: 1 on (-inf,1], 0 on [2,inf)
double chi(double t) {
  static const double total = [] {
    int N = 20000;
    double h = 1.0 / N, acc = 0;
    for (int i = 0; i < N; ++i) acc += smooth_step_raw((i + 0.5) * h) * h;
    return acc;
  }();
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  int N = 2000;
  double h = (t - 1.0) / N, acc = 0;
  for (int i = 0; i < N; ++i) acc += smooth_step_raw((i + 0.5) * h) * h;
  return 1.0 - acc / total;
}

}  // namespace

double psi_partition(int k, double y) {
  double a = chi(std::ldexp(std::fabs(y), k));
  double b = chi(std::ldexp(std::fabs(y), k + 1));
  return a - b;
}

double AveragingOp::kernel_at(double t) const {
  double a = std::fabs(t);
  if (a >= 2.0) return 0.0;
  double pos = a / kernel_step;
  int i = static_cast<int>(pos);
  double fr = pos - i;
  if (i + 1 >= static_cast<int>(kernel.size())) return kernel.back();
  return kernel[i] * (1 - fr) + kernel[i + 1] * fr;
}

AveragingOp make_averaging_op(int l) {
  AveragingOp ao;
  ao.l = l;
  // weights solving sum_j mu_j j^i = delta_{i0}, i = 0..l-1 (closed form
  // mu_j = (-1)^{j+1} C(l,j); kept as an explicit solve elsewhere in tests)
  ao.mu.resize(l);
  for (int j = 1; j <= l; ++j) ao.mu[j - 1] = ((j % 2) ? 1.0 : -1.0) * binomial(l, j);
  ao.theta_mass = 1.0;

  // tabulate the normalized self-convolution of the bump on [0,2]
  int M = 2048;
  int N = 2048;
  double hb = 2.0 / N;
  std::vector<double> th(N);
  double mass = bump_mass();
  for (int i = 0; i < N; ++i) th[i] = bump(-1.0 + (i + 0.5) * hb) / mass;
  ao.kernel.assign(M + 1, 0.0);
  ao.kernel_step = 2.0 / M;
  for (int m = 0; m <= M; ++m) {
    double t = m * ao.kernel_step;
    double acc = 0;
    for (int i = 0; i < N; ++i) {
      double u = -1.0 + (i + 0.5) * hb;
      double w = t - u;
      if (w > -1.0 && w < 1.0) acc += th[i] * bump(w) / mass * hb;
    }
    ao.kernel[m] = acc;
  }
  return ao;
}

GridFunction steklov_average(const GridFunction& phi, double eps, const AveragingOp& ao) {
  if (eps < phi.cell_size() - 1e-12)
    throw std::invalid_argument("steklov_average: eps below grid resolution");
  GridFunction out = phi;
  std::fill(out.v.begin(), out.v.end(), 0.0);
  int per = phi.per_axis();

  for (int j = 1; j <= ao.l; ++j) {
    double scale = j * eps / phi.cell_size();  // lattice nodes per unit step
    int R = static_cast<int>(std::ceil(2.0 * scale)) - 1;
    R = std::max(R, 0);
    std::vector<double> w(2 * R + 1);
    double tot = 0;
    for (int nu = -R; nu <= R; ++nu) {
      double val = ao.kernel_at(nu / scale);
      w[nu + R] = val;
      tot += val;
    }
    if (tot <= 0) continue;
    for (double& x : w) x /= tot;

    // separable convolution; near the boundary the in-domain weights are
    // renormalized so constants are preserved exactly
    GridFunction tmp = phi;
    for (int ax = 0; ax < phi.n; ++ax) {
      GridFunction nxt = tmp;
      parallel_for(tmp.cell_count(), [&](int i) {
        IVec c = cube_from_flat(phi.n, phi.K, i);
        double acc = 0, wsum = 0;
        for (int nu = -R; nu <= R; ++nu) {
          int t = c[ax] + nu;
          if (t < 0 || t >= per) continue;
          IVec cc = c;
          cc[ax] = t;
          acc += w[nu + R] * tmp.at(cc);
          wsum += w[nu + R];
        }
        nxt.v[i] = wsum > 0 ? acc / wsum : 0.0;
      });
      tmp = nxt;
    }
    for (int i = 0; i < out.cell_count(); ++i) out.v[i] += ao.mu[j - 1] * tmp.v[i];
  }
  return out;
}

SplineSeries besov_trace(const SplineSeries& s, const PlaneSpec& ps) {
  if (ps.nprime >= ps.n) throw std::invalid_argument("besov_trace: need nprime < n");
  int deg = s.degree;
  int ntail = ps.n - ps.nprime;
  // trailing-axis weights N(-m'') over m'' in [-deg, 0]
  std::vector<double> w(deg + 1);
  for (int off = -deg; off <= 0; ++off) w[off + deg] = bspline_eval(deg, -off);

  SplineSeries out;
  out.n = ps.nprime;
  out.degree = deg;
  out.source_r = s.source_r;
  out.realized_A = s.realized_A;
  for (int k = 0; k <= s.K(); ++k) {
    const SplineFn& L = s.levels[k];
    SplineFn T = zero_spline(ps.nprime, deg, L.k);
    for (int fl = 0; fl < T.coef_count(); ++fl) {
      IVec mp = T.index_from_flat(fl);
      double acc = 0;
      IVec tail{0, 0, 0};
      std::function<void(int, double)> rec = [&](int ax, double wt) {
        if (ax == ntail) {
          IVec m;
          for (int i = 0; i < ps.nprime; ++i) m[i] = mp[i];
          for (int i = 0; i < ntail; ++i) m[ps.nprime + i] = tail[i];
          acc += wt * L.coeff(m);
          return;
        }
        for (int off = -deg; off <= 0; ++off) {
          double wv = w[off + deg];
          if (wv == 0) continue;
          tail[ax] = off;
          rec(ax + 1, wt * wv);
        }
      };
      rec(0, 1.0);
      T.c[fl] = acc;
    }
    out.levels.push_back(T);
  }
  return out;
}

SplineSeries besov_extend(const SplineSeries& sprime, const PlaneSpec& ps) {
  if (sprime.n != ps.nprime) throw std::invalid_argument("besov_extend: dimension mismatch");
  int deg = sprime.degree;
  int ntail = ps.n - ps.nprime;
  std::vector<double> w(deg + 1);
  for (int off = -deg; off <= 0; ++off) w[off + deg] = bspline_eval(deg, -off);

  SplineSeries out;
  out.n = ps.n;
  out.degree = deg;
  out.source_r = sprime.source_r;
  out.realized_A = sprime.realized_A;
  for (int k = 0; k <= sprime.K(); ++k) {
    const SplineFn& L = sprime.levels[k];
    SplineFn E = zero_spline(ps.n, deg, L.k);
    for (int fl = 0; fl < E.coef_count(); ++fl) {
      IVec m = E.index_from_flat(fl);
      bool hit = true;
      for (int i = 0; i < ntail; ++i) {
        int off = m[ps.nprime + i];
        if (off < -deg || off > 0 || w[off + deg] == 0) {
          hit = false;
          break;
        }
      }
      if (!hit) continue;
      IVec mp{0, 0, 0};
      for (int i = 0; i < ps.nprime; ++i) mp[i] = m[i];
      E.c[fl] = L.coeff(mp);
    }
    out.levels.push_back(E);
  }
  return out;
}

MultiSeq trace_multiseq(const MultiSeq& ms, int nprime) {
  MultiSeq out;
  out.n = nprime;
  out.p = ms.p;
  out.K = ms.K;
  out.level.resize(ms.K + 1);
  for (int k = 0; k <= ms.K; ++k) {
    int count = cubes_per_level(nprime, k);
    out.level[k].resize(count);
    for (int i = 0; i < count; ++i) {
      IVec mp = cube_from_flat(nprime, k, i);
      IVec m{0, 0, 0};
      for (int ax = 0; ax < nprime; ++ax) m[ax] = mp[ax];
      out.level[k][i] = ms.at(k, m);
    }
  }
  return out;
}

SlabFn sobolev_extend(const GridFunction& phi, int l, int K, const AveragingOp& ao, int Ky) {
  if (ao.l != l) throw std::invalid_argument("sobolev_extend: operator order mismatch");
  K = std::min(K, phi.K);  // eps must stay above the grid resolution
  SlabFn f;
  f.nx = phi.n;
  f.Kx = phi.K;
  f.Ky = Ky;
  f.Klev = K;
  f.v.assign(static_cast<size_t>(f.y_cells()) * f.x_cells(), 0.0);

  std::vector<GridFunction> Ek(K + 1);
  for (int k = 1; k <= K; ++k) Ek[k] = steklov_average(phi, ipow2(-k), ao);

  for (int iy = 0; iy < f.y_cells(); ++iy) {
    double y = f.y_center(iy);
    for (int k = 1; k <= K; ++k) {
      double w = psi_partition(k, y);
      if (w == 0) continue;
      for (int xf = 0; xf < f.x_cells(); ++xf) f.at(iy, xf) += w * Ek[k].v[xf];
    }
  }
  return f;
}

GridFunction slab_restrict(const SlabFn& f) {
  GridFunction g;
  g.n = f.nx;
  g.K = f.Kx;
  g.v.resize(f.x_cells());
  // innermost band fully covered by the truncated partition
  double target = ipow2(-f.Klev);
  int iy = f.y_cells() / 2;
  double bestd = kInf;
  for (int i = f.y_cells() / 2; i < f.y_cells(); ++i) {
    double d = std::fabs(f.y_center(i) - target);
    if (f.y_center(i) >= target - 1e-12 && d < bestd) {
      bestd = d;
      iy = i;
    }
  }
  for (int xf = 0; xf < f.x_cells(); ++xf) g.v[xf] = f.at(iy, xf);
  return g;
}

double slab_energy(const SlabFn& f, const FieldNd& gamma, int l, double p) {
  int n = f.nx + 1;
  int xper = 1 << f.Kx;
  int yc = f.y_cells();
  int xcells = f.x_cells();
  double hx = ipow2(-f.Kx), hy = ipow2(-f.Ky);
  double cell_vol = std::pow(hx, f.nx) * hy;

  // strides in the flat (y-major) layout: y first, then x axes row-major
  int stride[kMaxDim + 1];
  stride[f.nx] = xcells;  // y axis
  {
    int s = 1;
    for (int ax = f.nx - 1; ax >= 0; --ax) {
      stride[ax] = s;
      s *= xper;
    }
  }
  auto axis_h = [&](int ax) { return ax == f.nx ? hy : hx; };

  double total = 0;
  std::vector<int> ord(n, 0);
  std::function<void(int, int)> enumerate = [&](int ax, int used) {
    if (ax == n) {
      // iterated central differences along each axis
      std::vector<double> cur = f.v;
      std::vector<int> margin(n, 0);
      for (int a = 0; a < n; ++a) {
        for (int t = 0; t < ord[a]; ++t) {
          std::vector<double> nxt(cur.size(), 0.0);
          int st = stride[a];
          for (size_t i = 0; i < cur.size(); ++i) {
            long lo = static_cast<long>(i) - st, hi2 = static_cast<long>(i) + st;
            if (lo < 0 || hi2 >= static_cast<long>(cur.size())) continue;
            nxt[i] = (cur[hi2] - cur[lo]) / (2.0 * axis_h(a));
          }
          cur = std::move(nxt);
          ++margin[a];
        }
      }
      double acc = 0, mxv = 0;
      for (int iy = margin[f.nx]; iy < yc - margin[f.nx]; ++iy) {
        IVec c{0, 0, 0};
        std::function<void(int)> cells = [&](int a) {
          if (a == f.nx) {
            int idx = iy * xcells;
            for (int i = 0; i < f.nx; ++i) idx += c[i] * stride[i];
            double coords[2 * kMaxDim];
            for (int i = 0; i < f.nx; ++i) coords[i] = (c[i] + 0.5) * hx;
            coords[f.nx] = f.y_center(iy);
            double t = std::fabs(gamma(coords, n) * cur[idx]);
            if (is_inf(p)) mxv = std::max(mxv, t);
            else acc += std::pow(t, p) * cell_vol;
            return;
          }
          for (int i = margin[a]; i < xper - margin[a]; ++i) {
            c[a] = i;
            cells(a + 1);
          }
        };
        cells(0);
      }
      total += is_inf(p) ? mxv : std::pow(acc, 1.0 / p);
      return;
    }
    for (ord[ax] = 0; ord[ax] + used <= l; ++ord[ax]) enumerate(ax + 1, used + ord[ax]);
    ord[ax] = 0;
  };
  enumerate(0, 0);
  return total;
}

void write_slab(const SlabFn& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_slab: cannot open " + path);
  os << "VSGF1\n";
  os << "n=" << f.nx << " K=" << f.Kx << " slab=1 Ky=" << f.Ky << " Klev=" << f.Klev << "\n";
  for (size_t i = 0; i < f.v.size(); ++i) {
    os << format_g17(f.v[i]);
    os << (((i + 1) % 8 == 0) ? '\n' : ' ');
  }
  if (f.v.size() % 8 != 0) os << '\n';
}

SlabFn read_slab(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_slab: cannot open " + path);
  std::string magic;
  std::getline(is, magic);
  if (magic != "VSGF1") throw std::runtime_error("read_slab: bad magic");
  std::string header;
  std::getline(is, header);
  SlabFn f;
  int slab = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) f.nx = std::stoi(tok.substr(2));
      else if (tok.rfind("K=", 0) == 0) f.Kx = std::stoi(tok.substr(2));
      else if (tok.rfind("slab=", 0) == 0) slab = std::stoi(tok.substr(5));
      else if (tok.rfind("Ky=", 0) == 0) f.Ky = std::stoi(tok.substr(3));
      else if (tok.rfind("Klev=", 0) == 0) f.Klev = std::stoi(tok.substr(5));
    }
  }
  if (slab != 1) throw std::runtime_error("read_slab: not a slab file");
  size_t count = static_cast<size_t>(f.y_cells()) * f.x_cells();
  f.v.reserve(count);
  double x;
  while (is >> x) {
    if (!std::isfinite(x)) throw std::runtime_error("read_slab: non-finite value");
    f.v.push_back(x);
  }
  if (f.v.size() != count) throw std::runtime_error("read_slab: value count mismatch");
  return f;
}

}  // namespace vs
