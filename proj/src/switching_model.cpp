#include "oligodyn/switching_model.hpp"

#include <cmath>
#include <string>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"
#include "oligodyn/parallel.hpp"

namespace oligodyn {

void validate(const SwitchingParams& params) {
  if (!(params.s >= 0.0) || !std::isfinite(params.s))
    throw InvalidParams("switching cost must be finite and >= 0, got " +
                        fmt_g12(params.s));
  if (!(params.delta >= 0.0 && params.delta < 1.0))
    throw InvalidParams("discount factor must lie in [0, 1), got " +
                        fmt_g12(params.delta));
}

SwitchingEq solve_switching(const SwitchingParams& params,
                            const SwitchingOptions& opts) {
  validate(params);
  const auto& d = params.dist;
  const double s = params.s;
  const double delta = params.delta;

  auto residual = [&d, s](double x) { return d.motion(x) + s; };
  if (opts.uniqueness_check) {
    const ScanResult scan =
        uniqueness_scan(residual, opts.scan_lo, opts.scan_hi, opts.scan_step);
    if (scan.sign_changes > 1)
      throw MultipleRoots("threshold residual has " +
                              std::to_string(scan.sign_changes) +
                              " sign changes on the scan grid",
                          scan.sign_changes);
  }
  const RootResult r = solve_monotone(residual, opts.root);

  SwitchingEq eq{};
  eq.s = s;
  eq.delta = delta;
  eq.dist = d;
  eq.x = r.root;
  eq.residual = r.residual;
  eq.iterations = r.iterations;

  const double x = r.root;
  const double F = d.cdf(x);
  eq.q1 = d.sf(x);
  eq.q0 = F;
  // (1 - 2F)/f without cancellation: the markup evaluated from both sides.
  eq.V = d.markup(x) - d.markup(-x);
  eq.p1 = d.markup(x) - delta * eq.V;
  eq.p0 = d.markup(-x) - delta * eq.V;
  eq.v0 = d.static_profit(-x) / (1.0 - delta);
  eq.v1 = d.static_profit(x) + delta * eq.v0;
  eq.pbar = eq.q1 * eq.p1 + eq.q0 * eq.p0;
  eq.pbar_closed =
      d.static_profit(x) + d.static_profit(-x) - delta * eq.V;
  eq.elasticity1 = -eq.p1 / d.markup(x);
  return eq;
}

double average_price(const SwitchingEq& eq) { return eq.pbar; }

namespace {

// Derivative of the quadratic through three points, evaluated at x0.
double one_sided_deriv(double x0, double x1, double x2, double y0, double y1,
                       double y2) {
  return y0 * ((x0 - x1) + (x0 - x2)) / ((x0 - x1) * (x0 - x2)) +
         y1 * (x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         y2 * (x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

SweepResult sweep_s(const std::vector<double>& s_grid, double delta,
                    const ShockDistribution& dist, const SwitchingOptions& opts) {
  if (s_grid.size() < 16)
    throw InvalidParams("switching-cost grid needs at least 16 points, got " +
                        std::to_string(s_grid.size()));
  if (s_grid.front() != 0.0)
    throw InvalidParams("switching-cost grid must start at 0");
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (!std::isfinite(s_grid[k]))
      throw InvalidParams("switching-cost grid has a non-finite entry");
    if (k > 0 && !(s_grid[k] > s_grid[k - 1]))
      throw InvalidParams("switching-cost grid must be strictly increasing");
  }

  const std::size_t n = s_grid.size();
  std::vector<SwitchingEq> eqs(n);
  parallel_for(static_cast<long long>(n), [&](int, long long lo, long long hi) {
    for (long long k = lo; k < hi; ++k) {
      SwitchingParams p{s_grid[static_cast<std::size_t>(k)], delta, dist};
      eqs[static_cast<std::size_t>(k)] = solve_switching(p, opts);
    }
  });

  SweepResult out;
  out.rows.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SwitchingEq& e = eqs[k];
    double dp;
    if (k == 0) {
      dp = one_sided_deriv(s_grid[0], s_grid[1], s_grid[2], eqs[0].pbar,
                           eqs[1].pbar, eqs[2].pbar);
    } else if (k == n - 1) {
      dp = one_sided_deriv(s_grid[n - 1], s_grid[n - 2], s_grid[n - 3],
                           eqs[n - 1].pbar, eqs[n - 2].pbar, eqs[n - 3].pbar);
    } else {
      dp = (eqs[k + 1].pbar - eqs[k - 1].pbar) / (s_grid[k + 1] - s_grid[k - 1]);
    }
    out.rows[k] = SweepRow{e.s, e.x, e.q1, e.p1, e.p0, e.pbar, e.V, dp};
  }

  // Locate where the derivative changes sign: s' is the last grid point of
  // the initial decreasing stretch, s'' the first grid point of the final
  // increasing stretch.
  out.sign_changes = 0;
  int first_flip = -1, last_flip = -1;
  int last_sign = 0;
  std::size_t last_sign_at = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = out.rows[k].dpbar_ds;
    const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      ++out.sign_changes;
      if (first_flip < 0) first_flip = static_cast<int>(last_sign_at);
      last_flip = static_cast<int>(k);
    }
    last_sign = sign;
    last_sign_at = k;
  }
  const double nan = std::nan("");
  out.s_prime = first_flip >= 0 ? s_grid[static_cast<std::size_t>(first_flip)] : nan;
  out.s_doubleprime =
      last_flip >= 0 ? s_grid[static_cast<std::size_t>(last_flip)] : nan;
  return out;
}

}  // namespace oligodyn
