#include "varsmooth/testfamilies.hpp"

#include <cmath>

namespace vs {

Field random_smooth_field(Rng& rng, int n) {
  double a = rng.uniform(-1, 1);
  double b = rng.uniform(0.3, 2.0);
  double w1 = rng.uniform(0.5, 3.0), w2 = rng.uniform(0.5, 3.0);
  double ph1 = rng.uniform(0, 6.283), ph2 = rng.uniform(0, 6.283);
  double cx = rng.uniform(0.2, 0.8), cy = rng.uniform(0.2, 0.8);
  double amp = rng.uniform(0.5, 1.5), width = rng.uniform(4, 20);
  if (n == 1) {
    return [=](const RVec& x) {
      return a + b * std::sin(3.14159265 * w1 * x[0] + ph1) +
             amp * std::exp(-width * (x[0] - cx) * (x[0] - cx));
    };
  }
  return [=](const RVec& x) {
    return a + b * std::sin(3.14159265 * (w1 * x[0] + w2 * x[1]) + ph1) +
           amp * std::exp(-width * ((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy))) +
           0.3 * std::cos(3.14159265 * w2 * x[1] + ph2);
  };
}

Field random_piecewise_smooth_field(Rng& rng, int n) {
  Field left = random_smooth_field(rng, n);
  Field right = random_smooth_field(rng, n);
  double split = rng.uniform(0.25, 0.75);
  double kink = rng.uniform(0, 1);
  double kc = rng.uniform(0.2, 0.8), kp = rng.uniform(1.1, 1.9), ka = rng.uniform(0.3, 1.0);
  return [=](const RVec& x) {
    double base = (x[0] < split) ? left(x) : right(x);
    if (kink > 0.5) base += ka * std::pow(std::fabs(x[0] - kc), kp);
    return base;
  };
}

Field random_polynomial_field(Rng& rng, int n, int max_coord_degree) {
  int d = max_coord_degree;
  std::vector<double> c;
  int count = 1;
  for (int i = 0; i < n; ++i) count *= (d + 1);
  for (int i = 0; i < count; ++i) c.push_back(rng.uniform(-1, 1));
  return [=](const RVec& x) {
    double acc = 0;
    for (int flat = 0; flat < count; ++flat) {
      int f = flat;
      double mono = 1;
      for (int ax = n - 1; ax >= 0; --ax) {
        int e = f % (d + 1);
        f /= (d + 1);
        mono *= std::pow(x[ax], e);
      }
      acc += c[flat] * mono;
    }
    return acc;
  };
}

SplineFn random_spline(Rng& rng, int n, int degree, int k, double amp) {
  SplineFn s = zero_spline(n, degree, k);
  for (double& c : s.c) c = amp * rng.uniform(-1, 1);
  return s;
}

MultiSeq weight_constant(int n, double p, int K, double s) {
  return multiseq_constant_smoothness(n, p, K, s);
}

MultiSeq weight_power_generated(int n, int d, double p, int K, double s, double beta) {
  MultiSeq gh = generate_from_weight(gamma_p_first_axis_power(beta), n, d, p, K);
  MultiSeq out = gh;
  // t_{k,m} = 2^{kn/p} s_{k,m} gamma_hat_{k,m} with s_k = 2^{ks}, so the
  // level factor reduces to 2^{ks}
  for (int k = 0; k <= K; ++k) {
    double factor = std::pow(2.0, k * s);
    for (double& v : out.level[k]) v *= factor;
  }
  return out;
}

FieldNd gamma_p_ones() {
  return [](const double*, int) { return 1.0; };
}

FieldNd gamma_p_first_axis_power(double beta) {
  return [beta](const double* x, int) { return std::pow(std::fabs(x[0]), beta); };
}

FieldNd gamma_p_product_power(double exponent) {
  return [exponent](const double* x, int dim) {
    double acc = 1;
    for (int i = 0; i < dim; ++i) acc *= std::pow(std::max(std::fabs(x[i]), 1e-9), exponent);
    return acc;
  };
}

}  // namespace vs
