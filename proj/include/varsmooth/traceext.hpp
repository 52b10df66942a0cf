#pragma once

#include "varsmooth/atomic.hpp"

namespace vs {

// Retained-coordinate description of the plane x'' = 0.
struct PlaneSpec {
  int n = 2;
  int nprime = 1;
};

// Two-stage mollifier with scale weights mu_1..mu_l chosen so that the order-j
// combination annihilates polynomial growth up to degree l-1.
struct AveragingOp {
  int l = 1;
  std::vector<double> mu;        // mu[j-1] for j = 1..l
  double theta_mass = 1.0;       // integral of the bump profile
  std::vector<double> kernel;    // tabulated self-convolution on [-2,2]
  double kernel_step = 0;

  double kernel_at(double t) const;
};
AveragingOp make_averaging_op(int l);

// Coefficient-level restriction of a spline series to the plane x'' = 0.
SplineSeries besov_trace(const SplineSeries& s, const PlaneSpec& ps);
// Right inverse: copies plane coefficients onto every trailing index whose
// basis factor is nonzero at 0.
SplineSeries besov_extend(const SplineSeries& sprime, const PlaneSpec& ps);

// Weight restriction t'_{k,m'} = t_{k,(m',0)}.
MultiSeq trace_multiseq(const MultiSeq& ms, int nprime);

// Smoothing operator; cell-lattice-aligned quadrature so that sampled
// polynomials of degree < l are reproduced exactly at interior cells.
GridFunction steklov_average(const GridFunction& phi, double eps, const AveragingOp& ao);

// Smooth dyadic partition functions on the y-interval: psi_k supported in the
// annulus 2^{-k+1}B \ 2^{-k-1}B, consecutive pairs summing to 1.
double psi_partition(int k, double y);

// Function on the slab [0,1]^{nx} x (-1,1).
struct SlabFn {
  int nx = 1, Kx = 0, Ky = 0;
  int Klev = 0;           // number of dyadic scales used by the construction
  std::vector<double> v;  // y-major: index = iy * x_cells + x_flat

  int x_cells() const { return cubes_per_level(nx, Kx); }
  int y_cells() const { return 2 << Ky; }
  double y_center(int iy) const { return -1.0 + (iy + 0.5) * ipow2(-Ky); }
  double at(int iy, int xflat) const { return v[static_cast<size_t>(iy) * x_cells() + xflat]; }
  double& at(int iy, int xflat) { return v[static_cast<size_t>(iy) * x_cells() + xflat]; }
};

// Dyadic-scale extension into the slab, truncated at K levels.
SlabFn sobolev_extend(const GridFunction& phi, int l, int K, const AveragingOp& ao, int Ky);

// Restriction of the slab function at the innermost covered band, the cells
// with |y| near 2^{-Klev}.
GridFunction slab_restrict(const SlabFn& f);

// Weighted Sobolev-type energy: sum over derivative orders |a| <= l of the
// weighted L_p norm of the finite-difference derivative, margins trimmed.
double slab_energy(const SlabFn& f, const FieldNd& gamma, int l, double p);

void write_slab(const SlabFn& f, const std::string& path);
SlabFn read_slab(const std::string& path);

}  // namespace vs
