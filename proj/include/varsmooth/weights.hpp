#pragma once

#include <optional>
#include <string>

#include "varsmooth/gridfn.hpp"

namespace vs {

// Family {t_k}, k = 0..K_work, of strictly positive functions sampled at a
// common fine resolution, together with the integrability exponent p.
struct WeightSequence {
  int n = 1;
  double p = 2;
  int K_work = 0;
  std::vector<GridFunction> level;  // size K_work+1

  void validate() const;
};

// Level- and cube-indexed positive reals t_{k,m}, the discrete avatar of the
// weight sequence: t_{k,m} = L_p mass of t_k over Q_{k,m}.
struct MultiSeq {
  int n = 1;
  double p = 2;
  int K = 0;
  std::vector<std::vector<double>> level;  // level[k] has 2^{kn} entries

  double at(int k, const IVec& m) const { return level[k][cube_flat_index(n, k, m)]; }
  double& at(int k, const IVec& m) { return level[k][cube_flat_index(n, k, m)]; }
  void validate() const;
};

MultiSeq associate(const WeightSequence& t);
WeightSequence bar_sequence(const MultiSeq& ms, int K_grid);

struct ClassReport {
  double alpha1 = 0, alpha2 = 0, alpha3 = 0;
  double C1 = 0, C2 = 0;
  double sigma1 = kInf, sigma2 = kInf;
  bool positive = false;
  bool cond1 = false, cond2 = false, cond3 = false;
  bool verdict = false;
  double fit_residual1 = 0, fit_residual2 = 0;
};

// Growth/oscillation diagnostics over all level pairs; slopes fitted by least
// squares on the per-gap worst-case log ratios, constants from the one-sided
// envelope at the fitted slope.
ClassReport check_X_class(const MultiSeq& ms, double p, double sigma1, double sigma2);

// Local Y-class diagnostic (the sup/inf form of the two conditions on the bar
// weights); alpha1/alpha2 are the fitted pointwise-ratio exponents.
ClassReport check_Y_class(const MultiSeq& ms, double p);

struct AlocResult {
  double constant = 0;
  int worst_level = 0;
  IVec worst_index{0, 0, 0};
  double worst_dilation = 1;
};
// Supremum of the Muckenhoupt-type product over dyadic cubes (dilations 1,
// 3/2, 2) of side <= a; p = 1 uses the average/min form over sampled cells.
AlocResult check_Aloc_p(const GridFunction& gamma, double p, double a = 1.0);

// Scalar field on R^{n+d}; receives (x, y) with x in-plane and y radial.
using FieldNd = std::function<double(const double* coords, int dim)>;

// Multiple sequence generated by a weight on R^{n+d}: the L_p mass of gamma
// over the cube-times-annulus product sets. gamma_p evaluates gamma^p.
MultiSeq generate_from_weight(const FieldNd& gamma_p, int n, int d, double p, int K,
                              int inplane_oversample = 3, int radial_points = 16);

struct DeltaExponents {
  double delta1 = 0;          // children-sum decay per annulus dimension
  double delta1_ambient = 0;  // same slope normalized per ambient dimension n+d
  double delta2 = 0;          // boundary-slab mass vs measure-fraction exponent
  double delta3 = 0;          // max neighbor log ratio
  double residual1 = 0, residual2 = 0;
};
DeltaExponents estimate_deltas(const MultiSeq& ms, double p, int d);

struct NontrivialReport {
  bool nontrivial = false;
  std::vector<double> partial_sums;
};
NontrivialReport check_nontrivial(const MultiSeq& ms, int l, double p, double q);

void write_multiseq(const MultiSeq& ms, const std::string& path);
MultiSeq read_multiseq(const std::string& path);

// Common constructions used across experiments.
MultiSeq multiseq_constant_smoothness(int n, double p, int K, double s);
MultiSeq multiseq_scale(const MultiSeq& a, const std::vector<double>& per_level);
MultiSeq multiseq_pointwise_product(const MultiSeq& a, const MultiSeq& b);

}  // namespace vs
