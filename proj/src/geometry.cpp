#include "varsmooth/geometry.hpp"

#include <algorithm>

namespace vs {

Box cube_box(const DyadicCube& c, double dilation) {
  if (dilation <= 0) throw std::invalid_argument("dilation must be positive");
  Box b;
  b.n = c.n;
  double s = c.side() * dilation;
  for (int i = 0; i < c.n; ++i) {
    b.lo[i] = (c.m[i] + 0.5) * c.side() - 0.5 * s;
    b.side[i] = s;
  }
  return b;
}

Box cube_as_box(const DyadicCube& c) { return cube_box(c, 1.0); }

DyadicCube ancestor(const DyadicCube& c, int target_level) {
  if (target_level > c.k) throw std::invalid_argument("ancestor: target level above cube level");
  DyadicCube a;
  a.n = c.n;
  a.k = target_level;
  int shift = c.k - target_level;
  for (int i = 0; i < c.n; ++i) {
    // floor division for negative indices as well
    int v = c.m[i];
    a.m[i] = (v >= 0) ? (v >> shift) : -(((-v) + (1 << shift) - 1) >> shift);
  }
  return a;
}

std::vector<DyadicCube> neighbors(const DyadicCube& c) {
  int range = 1 << c.k;
  std::vector<DyadicCube> out;
  IVec d{0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == c.n) {
      DyadicCube nb = c;
      bool ok = true;
      for (int i = 0; i < c.n; ++i) {
        nb.m[i] = c.m[i] + d[i];
        if (nb.m[i] < 0 || nb.m[i] >= range) ok = false;
      }
      if (ok) out.push_back(nb);
      return;
    }
    for (d[axis] = -1; d[axis] <= 1; ++d[axis]) rec(axis + 1);
  };
  rec(0);
  return out;
}

double ball_volume(int d, double radius) {
  switch (d) {
    case 0: return 1.0;
    case 1: return 2.0 * radius;
    case 2: return 3.14159265358979323846 * radius * radius;
    case 3: return 4.18879020478639098462 * radius * radius * radius;
    default: throw std::invalid_argument("ball_volume: dimension out of range");
  }
}

double shell_measure(const Shell& s) {
  double r_out = ipow2(-s.base.k);
  double annulus = ball_volume(s.d, r_out) - ball_volume(s.d, 0.5 * r_out);
  return s.base.volume() * annulus;
}

int cubes_per_level(int n, int k) {
  int per = 1 << k;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= per;
  return total;
}

int cube_flat_index(int n, int k, const IVec& m) {
  int per = 1 << k;
  int flat = 0;
  for (int i = 0; i < n; ++i) {
    if (m[i] < 0 || m[i] >= per) throw std::out_of_range("cube index outside domain");
    flat = flat * per + m[i];
  }
  return flat;
}

IVec cube_from_flat(int n, int k, int flat) {
  int per = 1 << k;
  IVec m{0, 0, 0};
  for (int i = n - 1; i >= 0; --i) {
    m[i] = flat % per;
    flat /= per;
  }
  return m;
}

IVec owning_cube(int n, int k, const RVec& x) {
  int per = 1 << k;
  IVec m{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    int v = static_cast<int>(std::floor(x[i] * per));
    m[i] = std::clamp(v, 0, per - 1);
  }
  return m;
}

}  // namespace vs
