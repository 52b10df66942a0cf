#pragma once

#include "varsmooth/splines.hpp"
#include "varsmooth/weights.hpp"

namespace vs {

// Deterministic generators for the experiment families used by the
// verification suites and the CLI sweeps.

Field random_smooth_field(Rng& rng, int n);
Field random_piecewise_smooth_field(Rng& rng, int n);
Field random_polynomial_field(Rng& rng, int n, int max_coord_degree);

SplineFn random_spline(Rng& rng, int n, int degree, int k, double amp = 1.0);

// t_{k,m} = 2^{ks} masses (constant smoothness s).
MultiSeq weight_constant(int n, double p, int K, double s);

// t_{k,m} = 2^{kn/p} s_{k,m} gamma_hat_{k,m} with s_k = 2^{ks} and the
// multiple sequence generated by a product power weight on R^{n+d}.
MultiSeq weight_power_generated(int n, int d, double p, int K, double s, double beta);

// gamma^p fields on R^{n+d}
FieldNd gamma_p_ones();
FieldNd gamma_p_first_axis_power(double beta);
// prod_i |x_i|^{p-1-eps} over all n+d coordinates
FieldNd gamma_p_product_power(double exponent);

}  // namespace vs
