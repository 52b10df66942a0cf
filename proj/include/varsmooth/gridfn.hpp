#pragma once

#include <string>

#include "varsmooth/geometry.hpp"
#include "varsmooth/util.hpp"

namespace vs {

// Exponent/value pair for an L_r norm; r = inf means the max over sampled cells.
struct LrNorm {
  double r = 2;
  double value = 0;
};

// Piecewise-constant function on [0,1]^n sampled at the centers of the
// 2^{nK} finest dyadic cells, row-major with the last axis fastest.
struct GridFunction {
  int n = 1;
  int K = 0;
  std::vector<double> v;

  int per_axis() const { return 1 << K; }
  int cell_count() const { return cubes_per_level(n, K); }
  double cell_size() const { return ipow2(-K); }
  double cell_volume() const { return ipow2(-K * n); }

  int flat(const IVec& c) const { return cube_flat_index(n, K, c); }
  double at(const IVec& c) const { return v[flat(c)]; }
  double& at(const IVec& c) { return v[flat(c)]; }
  RVec cell_center(int flat_index) const {
    IVec c = cube_from_flat(n, K, flat_index);
    RVec x{0, 0, 0};
    for (int i = 0; i < n; ++i) x[i] = (c[i] + 0.5) * cell_size();
    return x;
  }
  // Value at an arbitrary point of the box via the half-open tiling.
  double value_at(const RVec& x) const { return v[flat(owning_cube(n, K, x))]; }
};

GridFunction sample(const Field& f, int n, int K);

// Midpoint-rule L_r norm over region ∩ [0,1]^n; fractional cells are weighted
// by overlap volume. Empty intersection gives 0.
LrNorm lr_norm(const GridFunction& g, const Box& region, double r);

// Per-axis [first,last] cell ranges meeting the region plus overlap weights.
struct CellWindow {
  int first[kMaxDim];
  int last[kMaxDim];                      // inclusive; first > last means empty
  std::vector<double> axis_weight[kMaxDim];  // overlap length / cell size
};
CellWindow cell_window(int n, int K, const Box& region);

void write_gridfn(const GridFunction& g, const std::string& path);
GridFunction read_gridfn(const std::string& path);

GridFunction gf_scale(const GridFunction& g, double c);
GridFunction gf_sub(const GridFunction& a, const GridFunction& b);

}  // namespace vs
