#pragma once

#include <functional>
#include <vector>

namespace oligodyn {

struct RootOptions {
  double tol = 1e-10;               // on |residual|
  double bracket_half_width = 1.0;  // initial bracket [-w, w]
  double max_bracket = 1e3;         // expansion stops once |endpoint| reaches this
  int max_iterations = 200;         // bisection steps after bracketing
};

struct RootResult {
  double root;
  double residual;  // residual at the returned root
  int iterations;
  int bracket_expansions;
  double bracket_lo;  // bracket that started the bisection
  double bracket_hi;
};

/**
 * Safeguarded bisection for a residual with exactly one sign change.
 * Starts from [-w, w], doubles the bracket (clamped to max_bracket) until the
 * endpoint residuals differ in sign, then bisects until |residual| <= tol.
 * Fully deterministic: same inputs give bitwise-identical roots.
 *
 * Throws NoSignChange if expansion exhausts max_bracket, NonFinite if the
 * residual is not finite at an evaluation point, MaxIterExceeded if the
 * iteration budget runs out.
 */
RootResult solve_monotone(const std::function<double(double)>& residual,
                          const RootOptions& opts = {});

struct ScanResult {
  int sign_changes;               // adjacent strict sign flips over the grid
  bool any_root;                  // a sign change or an exact zero was seen
  bool unique;                    // exactly one sign change
  std::vector<double> locations;  // left endpoints of flip cells (capped)
};

/**
 * Counts sign changes of the residual on the grid lo, lo+step, ..., hi.
 * Zeros at grid points mark a root but do not interrupt the flip count.
 * Used to certify uniqueness before trusting a bisection root.
 */
ScanResult uniqueness_scan(const std::function<double(double)>& residual,
                           double lo, double hi, double step);

}  // namespace oligodyn
