#pragma once

#include "varsmooth/diffs.hpp"
#include "varsmooth/splines.hpp"
#include "varsmooth/weights.hpp"

namespace vs {

struct BesovParams {
  int l = 1;
  double p = 2, q = 2, r = 2;
  double c = 2.0;  // dilation for the cube-based variants
};

struct NormBreakdown {
  std::string variant;
  double zero_term = 0;
  std::vector<double> level_terms;  // k = 0..K_work
  double total = 0;

  double recompute(double q) const { return lp_aggregate(level_terms, q) + zero_term; }
};

// Difference-based norm with the averaged step window per level.
NormBreakdown norm_bbar(const GridFunction& phi, const WeightSequence& t, const BesovParams& bp);
// Sliding-window delta functional per level.
NormBreakdown norm_btilde(const GridFunction& phi, const WeightSequence& t, const BesovParams& bp);
// Multiple-sequence norm over dyadic cubes.
NormBreakdown norm_seq(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp);

enum class NormVariant { V2, V3, V4 };
// Dilated-cube variants: V2 cube-restricted delta, V3 local best approximation,
// V4 modulus of smoothness.
NormBreakdown norm_variant(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp,
                           NormVariant which, int modulus_samples = 0);

struct SNumbers {
  std::vector<double> s;  // s[0] is the level “-1” term, s[k+1] the level-k value
  bool exact = false;
  double value(int k) const { return s[k + 1]; }
};
// Weighted spline approximation numbers; exact weighted least squares for
// (p,r) = (2,2), T-operator surrogate otherwise.
SNumbers spline_approx_numbers(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp);

// Canonical telescoped spline series of degree `degree` through level K.
std::vector<SplineFn> telescope_series(const GridFunction& phi, int K, int degree, double r);

// Coefficient mass sum_m t_{k,m}^p |beta_{k,m}|^p with boundary indices read
// from the clamped cube, aggregated in l_q over levels.
double coefficient_mass(const std::vector<SplineFn>& series, const MultiSeq& ms,
                        const BesovParams& bp);
double level_coefficient_mass(const SplineFn& level_fn, const MultiSeq& ms, int k, double p);

struct NFunctionals {
  double N1 = 0, N2 = 0, N3 = 0, N4 = 0;
  double s_minus1 = 0;
};
NFunctionals n_functionals(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp);

enum class HardyBranch { Tail, Head };
struct HardyResult {
  double lhs = 0, rhs = 0, ratio = 0;
};
// Builds the majorized sequence b from a with equality in the defining bound
// and evaluates both sides of the weighted l_q inequality.
HardyResult hardy_check(const std::vector<double>& a, double q, double mu, double beta,
                        double lambda, HardyBranch branch);

}  // namespace vs
