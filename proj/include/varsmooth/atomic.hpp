#pragma once

#include "varsmooth/norms.hpp"

namespace vs {

// Per-level spline coefficient bundles; the represented function is the sum
// of the level splines.
struct SplineSeries {
  int n = 1;
  int degree = 1;
  std::vector<SplineFn> levels;  // k = 0..K
  double source_r = 2;
  double realized_A = 1;

  int K() const { return static_cast<int>(levels.size()) - 1; }
};

struct DecomposeReport {
  SplineSeries series;
  ClassReport gate;
  bool gate_ok = false;
  std::string gate_message;
  double recon_error = 0;               // L_r distance at the sample grid
  std::vector<double> level_masses;     // weighted coefficient masses per level
};

// Telescoped decomposition into degree-l atoms. A failed class gate is
// reported as a warning; the decomposition is still produced.
DecomposeReport decompose(const GridFunction& phi, const MultiSeq& ms, const BesovParams& bp);

GridFunction reconstruct(const SplineSeries& s, int up_to_level, int K_max);

struct SeriesBoundReport {
  double lhs = 0, rhs = 0, ratio = 0;
};
// Convergence estimate for partial sums of a coefficient bundle against the
// level-mass aggregate on the right.
SeriesBoundReport series_norm_bound(const SplineSeries& s, const MultiSeq& ms,
                                    const BesovParams& bp, double theta);

enum class LevelIneqMode { GammaGenerated, SigmaP };
struct LevelIneqReport {
  std::vector<double> lhs, rhs, ratio;  // per level k
  double max_ratio = 0;
  double exponent = 0;                  // decay exponent used on the right
};
// Weighted level sums of the delta functional against the Hardy-type
// aggregate of spline approximation numbers.
LevelIneqReport level_inequality_check(const GridFunction& phi, const MultiSeq& ms,
                                       const BesovParams& bp, LevelIneqMode mode,
                                       double alpha2, const DeltaExponents* de = nullptr,
                                       int annulus_d = 1);

void write_series(const SplineSeries& s, const std::string& path);
SplineSeries read_series(const std::string& path);

// sigma1 = theta * (p/theta)' used by the decomposition gate.
double gate_sigma1(double p, double theta);

}  // namespace vs
