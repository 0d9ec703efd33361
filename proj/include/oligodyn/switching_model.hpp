#pragma once

#include <vector>

#include "oligodyn/scalar_root.hpp"
#include "oligodyn/shock_dist.hpp"

namespace oligodyn {

/**
 * Duopoly for a single customer who pays a switching cost s >= 0 to change
 * supplier.  The stationary equilibrium is pinned down by one scalar
 * threshold x solving motion(x) + s = 0; everything else is closed form.
 */
struct SwitchingParams {
  double s;      // switching cost, >= 0
  double delta;  // discount factor in [0, 1)
  ShockDistribution dist = ShockDistribution::standard_normal();
};

void validate(const SwitchingParams& params);

struct SwitchingOptions {
  RootOptions root;
  bool uniqueness_check = true;  // scan the threshold residual on [-50, 50]
  double scan_lo = -50.0;
  double scan_hi = 50.0;
  double scan_step = 0.05;
};

struct SwitchingEq {
  double s;
  double delta;
  ShockDistribution dist = ShockDistribution::standard_normal();
  double x;            // threshold state variable, <= 0
  double q1, q0;       // insider retention probability 1-F(x) and complement
  double p1, p0;       // insider and outsider price
  double v1, v0;       // value with and without the customer
  double V;            // v1 - v0, equals (1 - 2F(x))/f(x)
  double pbar;         // transaction-weighted average price q1 p1 + q0 p0
  double pbar_closed;  // closed form [(1-F)^2 + F^2]/f + delta (2F-1)/f
  double elasticity1;  // insider demand elasticity -f(x) p1 / (1-F(x))
  double residual;     // threshold residual at x
  int iterations;
};

SwitchingEq solve_switching(const SwitchingParams& params,
                            const SwitchingOptions& opts = {});

/** Average transaction price for a solved equilibrium. */
double average_price(const SwitchingEq& eq);

/** One comparative-statics row; dpbar_ds is a finite-difference estimate. */
struct SweepRow {
  double s, x, q1, p1, p0, pbar, V, dpbar_ds;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double s_prime;       // largest grid s before the first sign change of dpbar/ds
  double s_doubleprime; // smallest grid s after the last sign change
  int sign_changes;     // sign flips of dpbar/ds across the grid
};

/**
 * Solves the model over a switching-cost grid (strictly increasing, first
 * entry 0, at least 16 points).  The derivative column uses central
 * differences in the interior and second-order one-sided stencils at both
 * ends; a plain one-sided difference at s = 0 would bury the flat start of
 * the average-price curve under O(step) error.
 */
SweepResult sweep_s(const std::vector<double>& s_grid, double delta,
                    const ShockDistribution& dist,
                    const SwitchingOptions& opts = {});

}  // namespace oligodyn
