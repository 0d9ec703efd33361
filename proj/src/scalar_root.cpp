#include "oligodyn/scalar_root.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"

namespace oligodyn {

namespace {

double eval_checked(const std::function<double(double)>& residual, double x) {
  const double r = residual(x);
  if (!std::isfinite(r))
    throw NonFinite("residual is not finite at x = " + fmt_g12(x), x);
  return r;
}

}  // namespace

RootResult solve_monotone(const std::function<double(double)>& residual,
                          const RootOptions& opts) {
  if (!(opts.tol > 0.0) || !(opts.bracket_half_width > 0.0) ||
      !(opts.max_bracket >= opts.bracket_half_width) || opts.max_iterations < 1)
    throw InvalidParams("solve_monotone: bad solver options");

  double lo = -opts.bracket_half_width;
  double hi = opts.bracket_half_width;
  double flo = eval_checked(residual, lo);
  double fhi = eval_checked(residual, hi);
  int expansions = 0;

  auto done = [&](double x, double fx, int iters) {
    return RootResult{x, fx, iters, expansions, lo, hi};
  };

  if (std::abs(flo) <= opts.tol) return done(lo, flo, 0);
  if (std::abs(fhi) <= opts.tol) return done(hi, fhi, 0);

  while ((flo < 0.0) == (fhi < 0.0)) {
    if (hi >= opts.max_bracket)
      throw NoSignChange("no sign change in [" + fmt_g12(lo) + ", " + fmt_g12(hi) +
                             "] after " + std::to_string(expansions) + " expansions",
                         lo, hi);
    lo = std::max(2.0 * lo, -opts.max_bracket);
    hi = std::min(2.0 * hi, opts.max_bracket);
    ++expansions;
    flo = eval_checked(residual, lo);
    fhi = eval_checked(residual, hi);
    if (std::abs(flo) <= opts.tol) return done(lo, flo, 0);
    if (std::abs(fhi) <= opts.tol) return done(hi, fhi, 0);
  }

  double a = lo, fa = flo;
  double b = hi, fb = fhi;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b)
      throw MaxIterExceeded("bisection interval collapsed at x = " + fmt_g12(mid) +
                                " with residual " + fmt_g12(std::min(std::abs(fa),
                                                                     std::abs(fb))),
                            it, std::abs(fa) < std::abs(fb) ? fa : fb);
    const double fm = eval_checked(residual, mid);
    if (std::abs(fm) <= opts.tol) return done(mid, fm, it);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  const double best = std::abs(fa) < std::abs(fb) ? fa : fb;
  throw MaxIterExceeded("no convergence after " +
                            std::to_string(opts.max_iterations) +
                            " bisection steps, residual " + fmt_g12(best),
                        opts.max_iterations, best);
}

ScanResult uniqueness_scan(const std::function<double(double)>& residual,
                           double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo))
    throw InvalidParams("uniqueness_scan: need hi > lo and step > 0");

  constexpr std::size_t kMaxLocations = 16;
  ScanResult res{0, false, false, {}};
  const long long n = static_cast<long long>(std::floor((hi - lo) / step));
  int last_sign = 0;
  double last_sign_x = lo;
  auto visit = [&](double x) {
    const double r = eval_checked(residual, x);
    const int sign = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
    if (sign == 0) {
      res.any_root = true;
      return;
    }
    if (last_sign != 0 && sign != last_sign) {
      ++res.sign_changes;
      res.any_root = true;
      if (res.locations.size() < kMaxLocations) res.locations.push_back(last_sign_x);
    }
    last_sign = sign;
    last_sign_x = x;
  };
  double grid_end = lo;
  for (long long k = 0; k <= n; ++k) {
    grid_end = lo + static_cast<double>(k) * step;
    visit(grid_end);
  }
  if (hi > grid_end) visit(hi);
  res.unique = res.sign_changes == 1;
  return res;
}

}  // namespace oligodyn
