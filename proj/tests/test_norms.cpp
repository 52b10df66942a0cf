#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "varsmooth/norms.hpp"
#include "varsmooth/testfamilies.hpp"

using namespace vs;

namespace {

BesovParams params(int l, double p, double q, double r) {
  BesovParams bp;
  bp.l = l;
  bp.p = p;
  bp.q = q;
  bp.r = r;
  return bp;
}

}  // namespace

TEST_CASE("zero function has zero norms") {
  GridFunction z = sample([](const RVec&) { return 0.0; }, 1, 6);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  BesovParams bp = params(2, 2, 2, 2);
  CHECK(norm_bbar(z, ws, bp).total == doctest::Approx(0.0));
  CHECK(norm_btilde(z, ws, bp).total == doctest::Approx(0.0));
  CHECK(norm_seq(z, ms, bp).total == doctest::Approx(0.0));
}

TEST_CASE("low-degree polynomials carry only the zero-level term") {
  Rng rng(51);
  GridFunction g = sample(random_polynomial_field(rng, 1, 1), 1, 7);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.5);
  WeightSequence ws = bar_sequence(ms, 7);
  BesovParams bp = params(2, 2, 2, 2);

  NormBreakdown nb = norm_bbar(g, ws, bp);
  for (double t : nb.level_terms) CHECK(t <= 1e-11);
  CHECK(nb.total == doctest::Approx(nb.zero_term).epsilon(1e-9));

  NormBreakdown nv = norm_variant(g, ms, bp, NormVariant::V3);
  for (double t : nv.level_terms) CHECK(t <= 1e-9);
  CHECK(nv.total == doctest::Approx(nv.zero_term).epsilon(1e-8));
}

TEST_CASE("homogeneity of the difference norms") {
  Rng rng(52);
  GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  BesovParams bp = params(2, 2, 2, 2);
  double base = norm_bbar(g, ws, bp).total;
  CHECK(norm_bbar(gf_scale(g, 2.0), ws, bp).total == doctest::Approx(2 * base).epsilon(1e-10));
  double bseq = norm_seq(g, ms, bp).total;
  CHECK(norm_seq(gf_scale(g, -3.0), ms, bp).total == doctest::Approx(3 * bseq).epsilon(1e-10));
}

TEST_CASE("sequence norm bounded by the averaged-difference norm") {
  // Hoelder direction for r <= p on bar-type weights
  Rng rng(53);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  BesovParams bp = params(2, 2, 2, 1);  // r = 1 <= p = 2
  double worst = 0;
  for (int t = 0; t < 8; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    double a = norm_seq(g, ms, bp).total;
    double b = norm_bbar(g, ws, bp).total;
    if (b > 0) worst = std::max(worst, a / b);
  }
  CHECK(worst < 100.0);
}

TEST_CASE("locality: a single bump only charges nearby cubes") {
  GridFunction g = sample(
      [](const RVec& x) {
        double d = x[0] - 0.25;
        return std::max(0.0, 1.0 - 400 * d * d);
      },
      1, 7);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  BesovParams bp = params(2, 2, 2, 2);
  // cubes beyond the step reach l*r(Q) of the bump support contribute nothing
  int k = 3;
  for (int i = 0; i < cubes_per_level(1, k); ++i) {
    DyadicCube c{1, k, cube_from_flat(1, k, i)};
    double v = delta_lr(g, cube_as_box(c), bp.l, bp.r, OmegaMode::FullBox);
    double reach = 0.5 * c.side() + bp.l * c.side() + 0.05;
    bool near = std::fabs((c.m[0] + 0.5) * c.side() - 0.25) < reach + 1e-12;
    if (!near) CHECK(v <= 1e-12);
  }
}

TEST_CASE("dilated-variant domination of the best-approximation variant") {
  Rng rng(54);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  BesovParams bp = params(2, 2, 2, 2);
  for (int t = 0; t < 5; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    NormBreakdown v3 = norm_variant(g, ms, bp, NormVariant::V3);
    NormBreakdown v4 = norm_variant(g, ms, bp, NormVariant::V4);
    // the modulus dominates the best error up to a modest constant, cube-wise
    for (size_t k = 0; k < v3.level_terms.size(); ++k)
      CHECK(v3.level_terms[k] <= 8.0 * v4.level_terms[k] + 1e-12);
  }
}

TEST_CASE("spline approximation numbers") {
  Rng rng(55);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  BesovParams bp = params(2, 2, 2, 2);

  // a level-1 spline of the fitting degree is annihilated from level 1 on
  SplineFn s = random_spline(rng, 1, 1, 1);
  GridFunction g = sample_spline(s, 7);
  SNumbers sn = spline_approx_numbers(g, ms, bp);
  CHECK(sn.exact);
  for (int k = 1; k <= 3; ++k) CHECK(sn.value(k) <= 1e-9);

  // level-flat weights: values nonincreasing in k
  MultiSeq flat = weight_constant(1, 2.0, 3, 0.0);
  GridFunction h = sample(random_piecewise_smooth_field(rng, 1), 1, 7);
  SNumbers sf = spline_approx_numbers(h, flat, bp);
  for (int k = 0; k < 3; ++k) CHECK(sf.value(k + 1) <= sf.value(k) * (1 + 1e-9));

  // surrogate branch is controlled by the sliding-window norm
  BesovParams bp1 = params(2, 2, 2, 1);
  WeightSequence ws = bar_sequence(ms, 7);
  double worst = 0;
  for (int t = 0; t < 5; ++t) {
    GridFunction u = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    SNumbers su = spline_approx_numbers(u, ms, bp1);
    CHECK_FALSE(su.exact);
    double nb = norm_btilde(u, ws, bp1).total;
    for (int k = 0; k <= 3; ++k)
      if (nb > 0) worst = std::max(worst, su.value(k) / nb);
  }
  CHECK(worst < 100.0);
}

TEST_CASE("coefficient functionals vanish on zero and order correctly") {
  GridFunction z = sample([](const RVec&) { return 0.0; }, 1, 6);
  MultiSeq ms = weight_constant(1, 2.0, 2, 1.0);
  BesovParams bp = params(2, 2, 2, 2);
  NFunctionals nf = n_functionals(z, ms, bp);
  CHECK(nf.N1 == doctest::Approx(0.0));
  CHECK(nf.N2 == doctest::Approx(0.0));
  CHECK(nf.N3 == doctest::Approx(0.0));
  CHECK(nf.N4 == doctest::Approx(0.0));

  Rng rng(56);
  for (int t = 0; t < 3; ++t) {
    GridFunction g = sample(random_smooth_field(rng, 1), 1, 6);
    NFunctionals n = n_functionals(g, ms, bp);
    CHECK(n.N3 <= n.N4 * (1 + 1e-9));
    CHECK(std::isfinite(n.N1));
    CHECK(std::isfinite(n.N2));
  }
}

TEST_CASE("weighted sequence inequality closed form") {
  // a_k = 2^{-2k}: head sum 8/3 against weight sum 2
  std::vector<double> a(60);
  for (size_t k = 0; k < a.size(); ++k) a[k] = std::pow(2.0, -2.0 * k);
  HardyResult hr = hardy_check(a, 1.0, 1.0, 1.0, 2.0, HardyBranch::Tail);
  CHECK(hr.lhs == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(hr.rhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hr.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  // a single nonzero entry: ratio controlled by the geometric tail
  std::vector<double> e(40, 0.0);
  e[7] = 1.0;
  HardyResult he = hardy_check(e, 2.0, 1.0, 0.5, 2.0, HardyBranch::Tail);
  CHECK(he.ratio <= 1.0 / (1.0 - std::pow(2.0, -0.5)) + 1e-9);

  CHECK_THROWS(hardy_check(a, 1.0, 1.0, 0.0, 2.0, HardyBranch::Tail));
  CHECK_THROWS(hardy_check(a, 1.0, 1.0, 1.0, 0.5, HardyBranch::Head));
  CHECK_THROWS(hardy_check(a, 1.0, 2.0, 1.0, 2.0, HardyBranch::Tail));
}

TEST_CASE("head-sum branch evaluates") {
  std::vector<double> a(50);
  Rng rng(57);
  for (double& x : a) x = rng.uniform(-1, 1);
  HardyResult hr = hardy_check(a, 2.0, 1.0, 1.0, 2.0, HardyBranch::Head);
  CHECK(std::isfinite(hr.ratio));
  CHECK(hr.lhs >= 0);
}

TEST_CASE("quasi-triangle inequality below exponent one") {
  Rng rng(58);
  MultiSeq ms = weight_constant(1, 0.7, 3, 1.0);
  BesovParams bp = params(2, 0.7, 0.7, 2);
  double C = std::pow(2.0, 1.0 / bp.p - 1.0) * std::pow(2.0, 1.0 / bp.q - 1.0);
  for (int t = 0; t < 6; ++t) {
    GridFunction f = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    GridFunction fg = f;
    for (size_t i = 0; i < fg.v.size(); ++i) fg.v[i] += g.v[i];
    double lhs = norm_seq(fg, ms, bp).total;
    double rhs = norm_seq(f, ms, bp).total + norm_seq(g, ms, bp).total;
    CHECK(lhs <= C * rhs * (1 + 1e-9));
  }
}

TEST_CASE("metric exponents below p give equivalent sliding-window norms") {
  Rng rng(59);
  // generated (Muckenhoupt-type) weight family
  MultiSeq ms = weight_power_generated(1, 1, 2.0, 3, 1.2, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  double lo = kInf, hi = 0;
  for (int t = 0; t < 8; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    double n1 = norm_btilde(g, ws, params(2, 2, 2, 1)).total;
    double n2 = norm_btilde(g, ws, params(2, 2, 2, 2)).total;
    if (n2 > 0) {
      lo = std::min(lo, n1 / n2);
      hi = std::max(hi, n1 / n2);
    }
  }
  CHECK(hi / lo < 20.0);  // one equivalence constant across the family
}

TEST_CASE("sup modifications of the sequence norm") {
  Rng rng(60);
  MultiSeq ms = weight_constant(1, kInf, 3, 1.0);
  BesovParams bp = params(2, kInf, kInf, 2);
  GridFunction z = sample([](const RVec&) { return 0.0; }, 1, 6);
  CHECK(norm_seq(z, ms, bp).total == doctest::Approx(0.0));
  GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
  double base = norm_seq(g, ms, bp).total;
  CHECK(base > 0);
  CHECK(norm_seq(gf_scale(g, 4.0), ms, bp).total == doctest::Approx(4 * base).epsilon(1e-10));
  // the sup-aggregated total dominates every level term
  NormBreakdown nb = norm_seq(g, ms, bp);
  for (double t : nb.level_terms) CHECK(t <= nb.total + 1e-12);
}

TEST_CASE("sliding-window norm agrees with the direct per-cell functional") {
  Rng rng(61);
  MultiSeq ms = weight_constant(1, 2.0, 3, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  for (double r : {1.0, 2.0, kInf}) {
    BesovParams bp = params(2, 2, 2, r);
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    NormBreakdown nb = norm_btilde(g, ws, bp);
    for (int k = 0; k <= 3; ++k) {
      // recompute the level term with the reference functional
      std::vector<double> vals(g.cell_count());
      double half = ipow2(-k);
      for (int i = 0; i < g.cell_count(); ++i) {
        RVec x = g.cell_center(i);
        Box w{1, {x[0] - half, 0, 0}, {2 * half, 0, 0}};
        vals[i] = ws.level[k].v[i] * delta_lr(g, w, bp.l, bp.r, OmegaMode::FullBox);
      }
      double term = 0;
      for (double v : vals) term += std::pow(v, bp.p) * g.cell_volume();
      term = std::pow(term, 1.0 / bp.p);
      CHECK(nb.level_terms[k] == doctest::Approx(term).epsilon(1e-12));
    }
  }
  // two-dimensional agreement on a small grid
  MultiSeq ms2 = weight_constant(2, 2.0, 2, 1.0);
  WeightSequence ws2 = bar_sequence(ms2, 4);
  BesovParams bp2 = params(2, 2, 2, 2);
  GridFunction g2 = sample(random_piecewise_smooth_field(rng, 2), 2, 4);
  NormBreakdown nb2 = norm_btilde(g2, ws2, bp2);
  for (int k = 0; k <= 2; ++k) {
    double term = 0;
    double half = ipow2(-k);
    for (int i = 0; i < g2.cell_count(); ++i) {
      RVec x = g2.cell_center(i);
      Box w{2, {x[0] - half, x[1] - half, 0}, {2 * half, 2 * half, 0}};
      double d = delta_lr(g2, w, bp2.l, bp2.r, OmegaMode::FullBox);
      term += std::pow(ws2.level[k].v[i] * d, bp2.p) * g2.cell_volume();
    }
    term = std::pow(term, 1.0 / bp2.p);
    CHECK(nb2.level_terms[k] == doctest::Approx(term).epsilon(1e-12));
  }
}

TEST_CASE("coefficient functionals are equivalent to the sequence norm") {
  Rng rng(62);
  MultiSeq ms = weight_power_generated(1, 1, 2.0, 3, 1.2, 1.0);
  BesovParams bp = params(2, 2, 2, 2);
  double lo12 = kInf, hi12 = 0, lo2n = kInf, hi2n = 0;
  for (int t = 0; t < 8; ++t) {
    GridFunction g = sample(random_smooth_field(rng, 1), 1, 6);
    NFunctionals nf = n_functionals(g, ms, bp);
    double nrm = norm_seq(g, ms, bp).total;
    CHECK(nf.N1 <= nf.N2 * (1 + 1e-9));
    if (nf.N2 > 0) {
      lo12 = std::min(lo12, nf.N1 / nf.N2);
      hi12 = std::max(hi12, nf.N1 / nf.N2);
    }
    if (nrm > 0) {
      lo2n = std::min(lo2n, nf.N2 / nrm);
      hi2n = std::max(hi2n, nf.N2 / nrm);
    }
  }
  CHECK(hi12 / lo12 < 50.0);
  CHECK(hi2n / lo2n < 50.0);
}

TEST_CASE("averaged and sliding-window norms are equivalent on generated weights") {
  Rng rng(63);
  MultiSeq ms = weight_power_generated(1, 1, 2.0, 3, 1.2, 1.0);
  WeightSequence ws = bar_sequence(ms, 6);
  BesovParams bp = params(2, 2, 2, 1);
  double lo = kInf, hi = 0;
  for (int t = 0; t < 8; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 6);
    double a = norm_bbar(g, ws, bp).total;
    double b = norm_btilde(g, ws, bp).total;
    if (b > 0) {
      lo = std::min(lo, a / b);
      hi = std::max(hi, a / b);
    }
  }
  CHECK(hi / lo < 20.0);
}
