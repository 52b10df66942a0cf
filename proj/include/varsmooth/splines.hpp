#pragma once

#include "varsmooth/polyfit.hpp"

namespace vs {

// Cardinal B-spline of the given degree with knots 0..degree+1, and its
// derivatives (one-sided values at the knots follow the half-open convention).
double bspline_eval(int degree, double t);
double bspline_deriv(int degree, double t, int order);

// Tensor spline sum_m beta_m prod_i N(2^k x_i - m_i) with coefficients stored
// over the index box [-degree, 2^k-1] per axis (all supports meeting the unit
// box); indices outside the box are treated as zero.
struct SplineFn {
  int n = 1;
  int degree = 0;
  int k = 0;
  std::vector<double> c;

  int lo_index() const { return -degree; }
  int per_axis() const { return (1 << k) + degree; }
  int coef_count() const {
    int t = 1;
    for (int i = 0; i < n; ++i) t *= per_axis();
    return t;
  }
  int flat(const IVec& m) const {
    int f = 0;
    for (int i = 0; i < n; ++i) {
      int off = m[i] - lo_index();
      if (off < 0 || off >= per_axis()) return -1;
      f = f * per_axis() + off;
    }
    return f;
  }
  double coeff(const IVec& m) const {
    int f = flat(m);
    return f < 0 ? 0.0 : c[f];
  }
  void set_coeff(const IVec& m, double v) {
    int f = flat(m);
    if (f >= 0) c[f] = v;
  }
  IVec index_from_flat(int f) const {
    IVec m{0, 0, 0};
    for (int i = n - 1; i >= 0; --i) {
      m[i] = f % per_axis() + lo_index();
      f /= per_axis();
    }
    return m;
  }

  double eval(const RVec& x) const;
  double eval_deriv(const RVec& x, const IVec& order) const;
};

SplineFn zero_spline(int n, int degree, int k);

// Knot-insertion expansion to a finer level; pointwise values on the unit box
// are preserved exactly.
SplineFn refine(const SplineFn& s, int target_level);

// Per-axis coefficient functional weights: a[nu] such that the spline
// coefficient equals sum_nu a[nu] D^nu f(center of Q_{k,m}) per axis.
std::vector<double> quasi_axis_weights(int l, int k, int m);

struct QuasiCoeffs {
  int n = 1;
  int k = 0;
  int l = 1;  // spline degree l-1
  std::vector<double> alpha;  // over the SplineFn index box
  std::string provenance;
};

// Quasi-interpolant coefficients read from a piecewise-polynomial field;
// centers outside the box use the polynomial of the nearest in-range cube.
QuasiCoeffs quasi_interpolant(const PiecewisePolyField& pp, int k, int l);
// Same functional applied to a spline's own (analytic) jets.
QuasiCoeffs quasi_interpolant_of_spline(const SplineFn& s);

SplineFn coeffs_to_spline(const QuasiCoeffs& q);

// T operator: quasi-interpolant of the almost-best piecewise field.
SplineFn t_operator(const GridFunction& phi, int k, int l, double r,
                    double* realized_A = nullptr);

struct StabilityReport {
  double c1 = 0;       // max over cubes of ||S||_Q / mid
  double c2 = 0;       // max over cubes of mid / ||S||_{C3 Q}
  double c3 = 0;       // dilation used for the right-hand window
  double ratio_min = 0, ratio_max = 0;  // ||S||_Q / mid over cubes
};
StabilityReport coeff_stability(const SplineFn& s, double r, int K_eval);

GridFunction sample_spline(const SplineFn& s, int K);

}  // namespace vs
