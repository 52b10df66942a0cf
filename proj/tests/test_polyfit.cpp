#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "varsmooth/polyfit.hpp"
#include "varsmooth/testfamilies.hpp"

using namespace vs;

TEST_CASE("polynomials of fitting degree are recovered exactly") {
  Rng rng(21);
  for (int l = 1; l <= 3; ++l) {
    GridFunction g = sample(random_polynomial_field(rng, 1, l - 1), 1, 7);
    DyadicCube c{1, 1, {1, 0, 0}};
    LocalPoly p = best_poly(g, cube_as_box(c), l, 2.0, DegreeMode::Coordinate);
    CHECK(p.error <= 1e-10);
  }
  GridFunction g2 = sample(random_polynomial_field(rng, 2, 1), 2, 5);
  DyadicCube c2{2, 1, {0, 1, 0}};
  LocalPoly p2 = best_poly(g2, cube_as_box(c2), 2, 2.0, DegreeMode::Coordinate);
  CHECK(p2.error <= 1e-10);
}

TEST_CASE("best constant for x^2 in the mean-square metric") {
  int K = 9;
  GridFunction g = sample([](const RVec& x) { return x[0] * x[0]; }, 1, K);
  LocalPoly p = best_poly(g, unit_box(1), 1, 2.0, DegreeMode::Total);
  // closed-form minimizer: constant 1/3, error sqrt(4/45) = 2/(3 sqrt 5)
  CHECK(p.coef[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  CHECK(p.error == doctest::Approx(2.0 / (3.0 * std::sqrt(5.0))).epsilon(1e-4));
}

TEST_CASE("best constant for x^2 in the sup metric equioscillates") {
  int K = 9;
  GridFunction g = sample([](const RVec& x) { return x[0] * x[0]; }, 1, K);
  LocalPoly p = best_poly(g, unit_box(1), 1, kInf, DegreeMode::Total);
  CHECK(p.coef[0] == doctest::Approx(0.5).epsilon(4 * ipow2(-K)));
  CHECK(p.error == doctest::Approx(0.5).epsilon(8 * ipow2(-K)));
  CHECK(p.realized_A <= 1.05);
}

namespace {

// exact best approximations on a tiny cell set, by exhaustive enumeration
double oracle_l1(const GridFunction& g, int l) {
  int N = g.cell_count();
  std::vector<double> xs(N), ys(N);
  for (int i = 0; i < N; ++i) {
    xs[i] = 2.0 * ((i + 0.5) * g.cell_size()) - 1.0;
    ys[i] = g.v[i];
  }
  double best = kInf;
  if (l == 1) {
    for (int i = 0; i < N; ++i) {
      double s = 0;
      for (int j = 0; j < N; ++j) s += std::fabs(ys[j] - ys[i]);
      best = std::min(best, s * g.cell_volume());
    }
    return best;
  }
  // affine fits through every pair of cells
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double b = (ys[j] - ys[i]) / (xs[j] - xs[i]);
      double a = ys[i] - b * xs[i];
      double s = 0;
      for (int t = 0; t < N; ++t) s += std::fabs(ys[t] - a - b * xs[t]);
      best = std::min(best, s * g.cell_volume());
    }
  return best;
}

double oracle_linf(const GridFunction& g, int l) {
  int N = g.cell_count();
  std::vector<double> xs(N), ys(N);
  for (int i = 0; i < N; ++i) {
    xs[i] = 2.0 * ((i + 0.5) * g.cell_size()) - 1.0;
    ys[i] = g.v[i];
  }
  if (l == 1) {
    double lo = kInf, hi = -kInf;
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    return (hi - lo) / 2;
  }
  // alternation over all triples for the affine Chebyshev problem:
  // solve a + b x + s E = y with signs +,-,+ and take the largest |E|
  double best = 0;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int t = j + 1; t < N; ++t) {
        double x1 = xs[i], x2 = xs[j], x3 = xs[t];
        double A[3][4] = {{1, x1, 1, ys[i]}, {1, x2, -1, ys[j]}, {1, x3, 1, ys[t]}};
        for (int c = 0; c < 3; ++c) {
          int piv = c;
          for (int r2 = c + 1; r2 < 3; ++r2)
            if (std::fabs(A[r2][c]) > std::fabs(A[piv][c])) piv = r2;
          std::swap(A[c], A[piv]);
          for (int r2 = 0; r2 < 3; ++r2) {
            if (r2 == c || A[c][c] == 0) continue;
            double f = A[r2][c] / A[c][c];
            for (int cc = c; cc < 4; ++cc) A[r2][cc] -= f * A[c][cc];
          }
        }
        if (A[2][2] != 0) best = std::max(best, std::fabs(A[2][3] / A[2][2]));
      }
  return best;
}

}  // namespace

TEST_CASE("iterative metrics certified against exhaustive oracles") {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 3);
    for (int l : {1, 2}) {
      LocalPoly p1 = best_poly(g, unit_box(1), l, 1.0, DegreeMode::Total);
      double o1 = oracle_l1(g, l);
      CHECK(p1.error <= 1.05 * o1 + 1e-12);
      LocalPoly pi = best_poly(g, unit_box(1), l, kInf, DegreeMode::Total);
      double oi = oracle_linf(g, l);
      CHECK(pi.error <= 1.05 * oi + 1e-12);
      CHECK(pi.error >= oi - 1e-9);
    }
  }
}

TEST_CASE("error is monotone in the degree and the cube") {
  Rng rng(24);
  GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 7);
  DyadicCube c{1, 2, {1, 0, 0}};
  double prev = kInf;
  for (int l = 1; l <= 4; ++l) {
    double e = best_poly(g, cube_as_box(c), l, 2.0, DegreeMode::Coordinate).error;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
  double small = best_poly(g, cube_as_box(c), 2, 2.0, DegreeMode::Total).error;
  double large = best_poly(g, cube_box(c, 2.0), 2, 2.0, DegreeMode::Total).error;
  CHECK(small <= large + 1e-12);
}

TEST_CASE("coordinate-degree error never exceeds total-degree error") {
  Rng rng(25);
  for (int t = 0; t < 5; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 2), 2, 5);
    DyadicCube c{2, 1, {1, 0, 0}};
    for (int l : {2, 3}) {
      double ec = best_poly(g, cube_as_box(c), l, 2.0, DegreeMode::Coordinate).error;
      double et = best_poly(g, cube_as_box(c), l, 2.0, DegreeMode::Total).error;
      CHECK(ec <= et + 1e-12);
    }
  }
}

TEST_CASE("almost-best field reproduces splines piecewise") {
  Rng rng(26);
  SplineFn s = random_spline(rng, 1, 1, 2);
  GridFunction g = sample_spline(s, 7);
  PiecewisePolyField f = almost_best_field(g, 2, 2, 2.0);
  CHECK(f.realized_A <= 1.05);
  for (const auto& piece : f.piece) CHECK(piece.error <= 1e-10);
  // field evaluation agrees with the spline inside every cube
  for (int i = 0; i < 16; ++i) {
    RVec x{(i + 0.5) / 16.0, 0, 0};
    const LocalPoly& p = f.at(owning_cube(1, 2, x));
    CHECK(p.eval(x) == doctest::Approx(s.eval(x)).epsilon(1e-9));
  }
}

TEST_CASE("degenerate cube is rejected") {
  GridFunction g = sample([](const RVec&) { return 1.0; }, 1, 2);
  Box tiny{1, {0.1, 0, 0}, {1e-9, 0, 0}};
  CHECK_THROWS(best_poly(g, tiny, 2, 2.0, DegreeMode::Total));
}

TEST_CASE("sub-one exponents stay within the almost-best factor") {
  Rng rng(27);
  for (int t = 0; t < 6; ++t) {
    GridFunction g = sample(random_piecewise_smooth_field(rng, 1), 1, 3);
    double r = 0.5;
    LocalPoly p = best_poly(g, unit_box(1), 2, r, DegreeMode::Total);
    // candidate minimizers interpolate two cells; enumerate them
    int N = g.cell_count();
    double oracle = kInf;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        double xi = 2.0 * ((i + 0.5) * g.cell_size()) - 1.0;
        double xj = 2.0 * ((j + 0.5) * g.cell_size()) - 1.0;
        double b = (g.v[j] - g.v[i]) / (xj - xi);
        double a = g.v[i] - b * xi;
        double sum = 0;
        for (int c = 0; c < N; ++c) {
          double xc = 2.0 * ((c + 0.5) * g.cell_size()) - 1.0;
          sum += std::pow(std::fabs(g.v[c] - a - b * xc), r) * g.cell_volume();
        }
        oracle = std::min(oracle, std::pow(sum, 1.0 / r));
      }
    CHECK(p.error <= 1.25 * oracle + 1e-12);
    CHECK(p.realized_A == doctest::Approx(1.25));
  }
}
