#pragma once

#include <vector>

#include "varsmooth/util.hpp"

namespace vs {

// Open dyadic cube prod_i (m_i/2^k, (m_i+1)/2^k) in R^n.
struct DyadicCube {
  int n = 1;
  int k = 0;
  IVec m{0, 0, 0};

  double side() const { return ipow2(-k); }
  double lo(int axis) const { return m[axis] * side(); }
  double hi(int axis) const { return (m[axis] + 1) * side(); }
  RVec center() const {
    RVec c{0, 0, 0};
    for (int i = 0; i < n; ++i) c[i] = (m[i] + 0.5) * side();
    return c;
  }
  double volume() const { return ipow2(-k * n); }
};

// Axis-aligned box given by lower corner and positive side lengths.
struct Box {
  int n = 1;
  RVec lo{0, 0, 0};
  RVec side{1, 1, 1};

  double hi(int axis) const { return lo[axis] + side[axis]; }
  double volume() const {
    double v = 1;
    for (int i = 0; i < n; ++i) v *= side[i];
    return v;
  }
  bool contains(const RVec& x, double tol = 1e-12) const {
    for (int i = 0; i < n; ++i)
      if (x[i] < lo[i] - tol || x[i] > hi(i) + tol) return false;
    return true;
  }
};

inline Box unit_box(int n) {
  Box b;
  b.n = n;
  for (int i = 0; i < n; ++i) {
    b.lo[i] = 0;
    b.side[i] = 1;
  }
  return b;
}

// Product of a base cube in R^n with the dyadic annulus 2^-k B^d \ 2^-k-1 B^d.
struct Shell {
  DyadicCube base;
  int d = 1;
};

Box cube_box(const DyadicCube& c, double dilation);
Box cube_as_box(const DyadicCube& c);
DyadicCube ancestor(const DyadicCube& c, int target_level);

// Same-level cubes differing by at most 1 per index, clipped to [0,1]^n.
std::vector<DyadicCube> neighbors(const DyadicCube& c);

double ball_volume(int d, double radius);
double shell_measure(const Shell& s);

// Row-major linear index of an in-range cube at level k (indices in [0,2^k)^n).
int cube_flat_index(int n, int k, const IVec& m);
IVec cube_from_flat(int n, int k, int flat);
int cubes_per_level(int n, int k);

// Index of the half-open tile [m/2^k,(m+1)/2^k)^n containing x, clipped to the
// domain range so callers can look up boundary samples.
IVec owning_cube(int n, int k, const RVec& x);

}  // namespace vs
