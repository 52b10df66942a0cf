#include "varsmooth/gridfn.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vs {

GridFunction sample(const Field& f, int n, int K) {
  GridFunction g;
  g.n = n;
  g.K = K;
  g.v.resize(g.cell_count());
  for (int i = 0; i < g.cell_count(); ++i) {
    double val = f(g.cell_center(i));
    if (!std::isfinite(val)) throw std::runtime_error("sample: non-finite value");
    g.v[i] = val;
  }
  return g;
}

CellWindow cell_window(int n, int K, const Box& region) {
  CellWindow w;
  int per = 1 << K;
  double h = ipow2(-K);
  for (int ax = 0; ax < n; ++ax) {
    double lo = std::max(region.lo[ax], 0.0);
    double hi = std::min(region.hi(ax), 1.0);
    if (hi <= lo + 1e-15) {
      w.first[ax] = 1;
      w.last[ax] = 0;
      continue;
    }
    int f = std::clamp(static_cast<int>(std::floor(lo / h)), 0, per - 1);
    int l = std::clamp(static_cast<int>(std::ceil(hi / h)) - 1, 0, per - 1);
    // trim cells with zero overlap produced by the rounding above
    while (f <= l && std::min((f + 1) * h, hi) - std::max(f * h, lo) <= 1e-15) ++f;
    while (l >= f && std::min((l + 1) * h, hi) - std::max(l * h, lo) <= 1e-15) --l;
    w.first[ax] = f;
    w.last[ax] = l;
    w.axis_weight[ax].clear();
    for (int i = f; i <= l; ++i) {
      double ov = std::min((i + 1) * h, hi) - std::max(i * h, lo);
      w.axis_weight[ax].push_back(ov / h);
    }
  }
  return w;
}

LrNorm lr_norm(const GridFunction& g, const Box& region, double r) {
  LrNorm out;
  out.r = r;
  CellWindow w = cell_window(g.n, g.K, region);
  for (int ax = 0; ax < g.n; ++ax)
    if (w.first[ax] > w.last[ax]) return out;

  double cell_vol = g.cell_volume();
  double acc = 0, mx = 0;
  IVec c{0, 0, 0};
  std::function<void(int, double)> rec = [&](int ax, double wt) {
    if (ax == g.n) {
      double val = std::fabs(g.at(c));
      if (is_inf(r)) {
        if (wt > 0) mx = std::max(mx, val);
      } else {
        acc += std::pow(val, r) * wt * cell_vol;
      }
      return;
    }
    for (int i = w.first[ax]; i <= w.last[ax]; ++i) {
      c[ax] = i;
      rec(ax + 1, wt * w.axis_weight[ax][i - w.first[ax]]);
    }
  };
  rec(0, 1.0);
  out.value = is_inf(r) ? mx : std::pow(acc, 1.0 / r);
  return out;
}

void write_gridfn(const GridFunction& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_gridfn: cannot open " + path);
  f << "VSGF1\n";
  f << "n=" << g.n << " K=" << g.K << "\n";
  for (size_t i = 0; i < g.v.size(); ++i) {
    f << format_g17(g.v[i]);
    f << (((i + 1) % 8 == 0) ? '\n' : ' ');
  }
  if (g.v.size() % 8 != 0) f << '\n';
}

GridFunction read_gridfn(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_gridfn: cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "VSGF1") throw std::runtime_error("read_gridfn: bad magic");
  std::string header;
  std::getline(f, header);
  int n = -1, K = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      else if (tok.rfind("K=", 0) == 0) K = std::stoi(tok.substr(2));
      else throw std::runtime_error("read_gridfn: unknown header token " + tok);
    }
  }
  if (n < 1 || n > kMaxDim || K < 0) throw std::runtime_error("read_gridfn: bad header");
  GridFunction g;
  g.n = n;
  g.K = K;
  int count = g.cell_count();
  g.v.reserve(count);
  double x;
  while (f >> x) {
    if (!std::isfinite(x)) throw std::runtime_error("read_gridfn: non-finite value");
    g.v.push_back(x);
  }
  if (static_cast<int>(g.v.size()) != count)
    throw std::runtime_error("read_gridfn: value count mismatch");
  return g;
}

GridFunction gf_scale(const GridFunction& g, double c) {
  GridFunction out = g;
  for (double& x : out.v) x *= c;
  return out;
}

GridFunction gf_sub(const GridFunction& a, const GridFunction& b) {
  if (a.n != b.n || a.K != b.K) throw std::invalid_argument("gf_sub: shape mismatch");
  GridFunction out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

}  // namespace vs
