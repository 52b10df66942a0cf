#pragma once

#include "varsmooth/gridfn.hpp"

namespace vs {

struct DiffParams {
  int l = 1;
  double r = 2;
};

double binomial(int n, int k);

// Order-l forward difference with step h at x; zero unless the segment
// [x, x+lh] stays inside omega (omega = unit box when null).
double forward_diff(const GridFunction& g, const RVec& h, const RVec& x, int l,
                    const Box* omega = nullptr);

// Averaged difference over the step window t*I^n, midpoint rule on the fine
// lattice; r = inf takes the max over lattice steps.
double avg_diff(const GridFunction& g, double t, const RVec& x, int l, double r);
double avg_diff_at_cell(const GridFunction& g, double t, const IVec& cell, int l, double r);

enum class OmegaMode { FullBox, Cube };

// Cube-and-step averaged difference functional: double midpoint quadrature in
// (x, h) over Q x r(Q)I^n, normalized by r(Q)^{2n}. Cube mode additionally
// restricts segments to Q itself.
double delta_lr(const GridFunction& g, const Box& Q, int l, double r, OmegaMode mode);

// Max over a lattice of H steps per axis of the L_r norm of the clipped
// difference; approximates the sup-over-steps modulus on Q.
double modulus(const GridFunction& g, const Box& Q, int l, double r, int H = 64);

}  // namespace vs
