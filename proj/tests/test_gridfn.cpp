#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "varsmooth/gridfn.hpp"

using namespace vs;

TEST_CASE("sampling at cell centers") {
  GridFunction g1 = sample([](const RVec&) { return 1.0; }, 1, 3);
  CHECK(g1.v.size() == 8);
  for (double v : g1.v) CHECK(v == doctest::Approx(1.0));

  GridFunction gx = sample([](const RVec& x) { return x[0]; }, 1, 1);
  CHECK(gx.v[0] == doctest::Approx(0.25));
  CHECK(gx.v[1] == doctest::Approx(0.75));

  GridFunction gxy = sample([](const RVec& x) { return x[0] * x[1]; }, 2, 1);
  CHECK(gxy.v[0] == doctest::Approx(0.0625));
  CHECK(gxy.v[1] == doctest::Approx(0.1875));
  CHECK(gxy.v[2] == doctest::Approx(0.1875));
  CHECK(gxy.v[3] == doctest::Approx(0.5625));

  CHECK_THROWS(sample([](const RVec& x) { return 1.0 / (x[0] - x[0]); }, 1, 2));
}

TEST_CASE("lr_norm values") {
  int K = 8;
  GridFunction ones = sample([](const RVec&) { return 1.0; }, 1, K);
  CHECK(lr_norm(ones, unit_box(1), 2.0).value == doctest::Approx(1.0));

  GridFunction gx = sample([](const RVec& x) { return x[0]; }, 1, K);
  // closed form (integral of x^2)^{1/2} = 1/sqrt(3), midpoint error O(4^-K)
  CHECK(lr_norm(gx, unit_box(1), 2.0).value ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
  CHECK(lr_norm(gx, unit_box(1), kInf).value == doctest::Approx(1.0 - ipow2(-K - 1)));

  Box empty;
  empty.n = 1;
  empty.lo[0] = 2.0;
  empty.side[0] = 1.0;
  CHECK(lr_norm(gx, empty, 2.0).value == 0.0);
}

TEST_CASE("lr_norm homogeneity and region monotonicity") {
  Rng rng(9);
  GridFunction g = sample([&](const RVec& x) { return std::sin(7 * x[0]) + 0.3; }, 1, 6);
  for (double r : {1.0, 2.0, 3.5}) {
    double base = lr_norm(g, unit_box(1), r).value;
    CHECK(lr_norm(gf_scale(g, -2.5), unit_box(1), r).value == doctest::Approx(2.5 * base));
  }
  for (int t = 0; t < 20; ++t) {
    double lo = rng.uniform(0, 0.5), hi = rng.uniform(0.5, 1.0);
    Box small{1, {lo, 0, 0}, {hi - lo, 1, 1}};
    Box big{1, {lo / 2, 0, 0}, {hi - lo / 2, 1, 1}};
    CHECK(lr_norm(g, small, 2.0).value <= lr_norm(g, big, 2.0).value + 1e-12);
  }
}

TEST_CASE("nesting identity: child masses add up exactly") {
  GridFunction g = sample([](const RVec& x) { return std::cos(5 * x[0] * x[1]) + 2; }, 2, 5);
  double r = 2.0;
  for (int k = 0; k < 3; ++k) {
    int count = cubes_per_level(2, k);
    for (int i = 0; i < count; ++i) {
      DyadicCube c{2, k, cube_from_flat(2, k, i)};
      double parent = std::pow(lr_norm(g, cube_as_box(c), r).value, r);
      double sum = 0;
      for (int off = 0; off < 4; ++off) {
        DyadicCube ch{2, k + 1, {2 * c.m[0] + off % 2, 2 * c.m[1] + off / 2, 0}};
        sum += std::pow(lr_norm(g, cube_as_box(ch), r).value, r);
      }
      CHECK(sum == doctest::Approx(parent).epsilon(1e-12));
    }
  }
}

TEST_CASE("file round trip is bit exact") {
  GridFunction g = sample([](const RVec& x) { return std::exp(x[0]) - x[1]; }, 2, 4);
  std::string path = "tmp_roundtrip.vsgf";
  write_gridfn(g, path);
  GridFunction h = read_gridfn(path);
  REQUIRE(h.v.size() == g.v.size());
  for (size_t i = 0; i < g.v.size(); ++i) CHECK(h.v[i] == g.v[i]);
  std::remove(path.c_str());
}

TEST_CASE("malformed files are rejected") {
  {
    std::ofstream f("tmp_bad1.vsgf");
    f << "VSGF1\nn=1 K=2\n1 2 3\n";
  }
  CHECK_THROWS(read_gridfn("tmp_bad1.vsgf"));
  {
    std::ofstream f("tmp_bad2.vsgf");
    f << "VSGF1\nn=1 K=1\nnan 1\n";
  }
  CHECK_THROWS(read_gridfn("tmp_bad2.vsgf"));
  {
    std::ofstream f("tmp_bad3.vsgf");
    f << "WRONG\nn=1 K=1\n0 1\n";
  }
  CHECK_THROWS(read_gridfn("tmp_bad3.vsgf"));
  std::remove("tmp_bad1.vsgf");
  std::remove("tmp_bad2.vsgf");
  std::remove("tmp_bad3.vsgf");
}
