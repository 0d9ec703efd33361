#include "oligodyn/lbd_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"
#include "oligodyn/parallel.hpp"

namespace oligodyn {

void validate(const LbdParams& params) {
  if (params.m < 1)
    throw InvalidParams("experience cap m must be >= 1, got " +
                        std::to_string(params.m));
  if (params.costs.size() != static_cast<std::size_t>(params.m) + 1)
    throw InvalidParams("cost ladder needs m + 1 = " + std::to_string(params.m + 1) +
                        " entries, got " + std::to_string(params.costs.size()));
  for (double c : params.costs)
    if (!std::isfinite(c)) throw InvalidParams("cost ladder has a non-finite entry");
  for (int k = 0; k + 1 <= params.m; ++k) {
    if (params.costs[k + 1] > params.costs[k])
      throw InvalidParams("cost ladder must be nonincreasing; c(" +
                          std::to_string(k + 1) + ") > c(" + std::to_string(k) + ")");
    // Equal steps are allowed only at the cap itself.
    if (k + 1 < params.m && params.costs[k + 1] == params.costs[k])
      throw InvalidParams("cost ladder must decrease strictly before the cap at c(" +
                          std::to_string(k + 1) + ")");
  }
  if (!(params.delta >= 0.0 && params.delta < 1.0))
    throw InvalidParams("discount factor must lie in [0, 1), got " +
                        fmt_g12(params.delta));
}

double unit_cost(const LbdParams& params, int i) {
  return params.costs[static_cast<std::size_t>(std::clamp(i, 0, params.m))];
}

LbdEquilibrium::LbdEquilibrium(int m, LbdParams params)
    : m_(m), params_(std::move(params)) {
  const std::size_t n2 = static_cast<std::size_t>(m_ + 1) * (m_ + 1);
  P_.assign(n2, 0.0);
  p_.assign(n2, 0.0);
  q_.assign(n2, 0.0);
  v_.assign(n2, 0.0);
  w_.assign(n2, 0.0);
  W_.assign(n2, 0.0);
  C_.assign(n2, 0.0);
  res_.assign(n2, 0.0);
  bres_.assign(n2, 0.0);
}

void LbdEquilibrium::finalize() {
  const auto& d = params_.dist;
  const double delta = params_.delta;
  auto cap = [this](int k) { return std::min(k + 1, m_); };
  for (int i = 0; i <= m_; ++i) {
    for (int j = 0; j <= m_; ++j) {
      const std::size_t s = idx(i, j);
      q_[s] = d.sf(P_[s]);
      C_[s] = unit_cost(params_, i) - unit_cost(params_, j);
      w_[s] = v(cap(i), j) - v(i, cap(j));
    }
  }
  for (int i = 0; i <= m_; ++i) {
    for (int j = 0; j <= m_; ++j) {
      const std::size_t s = idx(i, j);
      W_[s] = w_[s] - w_[idx(j, i)];
      p_[s] = unit_cost(params_, i) + d.markup(P_[s]) - delta * w_[s];
      const double continuation =
          q_[s] * (p_[s] - unit_cost(params_, i) + delta * v(cap(i), j)) +
          (1.0 - q_[s]) * delta * v(i, cap(j));
      bres_[s] = v_[s] - continuation;
    }
  }
}

namespace {

// Solves one off-diagonal pricing condition, optionally certifying root
// uniqueness with a sign-change scan over the same residual.
RootResult solve_state(const std::function<double(double)>& residual, int i, int j,
                       const LbdOptions& opts) {
  if (opts.uniqueness_check) {
    const ScanResult scan =
        uniqueness_scan(residual, opts.scan_lo, opts.scan_hi, opts.scan_step);
    if (scan.sign_changes > 1)
      throw MultipleRoots("state (" + std::to_string(i) + "," + std::to_string(j) +
                              "): residual has " + std::to_string(scan.sign_changes) +
                              " sign changes on the scan grid",
                          scan.sign_changes);
  }
  return solve_monotone(residual, opts.root);
}

}  // namespace

LbdEquilibrium solve_backward(const LbdParams& params, const LbdOptions& opts) {
  validate(params);
  const int m = params.m;
  const auto& d = params.dist;
  const double delta = params.delta;
  const double H0 = d.static_profit(0.0);

  LbdEquilibrium eq(m, params);
  // Absorbing cap state: both firms priced symmetrically forever.
  eq.v(m, m) = H0 / (1.0 - delta);
  eq.P(m, m) = 0.0;

  for (int total = 2 * m - 1; total >= 0; --total) {
    for (int i = std::min(m, total); 2 * i >= total; --i) {
      const int j = total - i;
      if (j < 0 || j > m) continue;
      if (i == j) {
        eq.P(i, i) = 0.0;
        eq.v(i, i) = H0 + delta * eq.v(i, std::min(i + 1, m));
        continue;
      }
      const double C = unit_cost(params, i) - unit_cost(params, j);
      if (i < m) {
        // All four continuation values sit at total + 1 and are known.
        const double W = eq.v(i + 1, j) - eq.v(i, j + 1) - eq.v(j + 1, i) +
                         eq.v(j, i + 1);
        const double rhs = C - delta * W;
        auto residual = [&d, rhs](double P) { return d.motion(P) - rhs; };
        const RootResult r = solve_state(residual, i, j, opts);
        eq.P(i, j) = r.root;
        eq.P(j, i) = -r.root;
        eq.root_residual(i, j) = r.residual;
        eq.root_residual(j, i) = r.residual;
        eq.v(i, j) = d.static_profit(r.root) + delta * eq.v(i, j + 1);
        eq.v(j, i) = d.static_profit(-r.root) + delta * eq.v(j, i + 1);
      } else {
        // Cap edge: v(m, j) and v(j, m) share this total.  Substituting the
        // value recursion for both eliminates them from the drift term:
        //   w(m,j) = H(P) - (1-delta) v(m,j+1)
        //   w(j,m) = v(j+1,m) - H(-P)/(1-delta)
        const double vmj1 = eq.v(m, j + 1);
        const double vj1m = eq.v(j + 1, m);
        auto residual = [&, C](double P) {
          const double W = d.static_profit(P) - (1.0 - delta) * vmj1 - vj1m +
                           d.static_profit(-P) / (1.0 - delta);
          return d.motion(P) - C + delta * W;
        };
        const RootResult r = solve_state(residual, i, j, opts);
        eq.P(m, j) = r.root;
        eq.P(j, m) = -r.root;
        eq.root_residual(m, j) = r.residual;
        eq.root_residual(j, m) = r.residual;
        eq.v(m, j) = d.static_profit(r.root) + delta * vmj1;
        eq.v(j, m) = d.static_profit(-r.root) / (1.0 - delta);
      }
    }
  }
  eq.finalize();
  return eq;
}

TwoStepReport solve_two_step(const LbdParams& params, const RootOptions& root) {
  validate(params);
  if (params.m != 1)
    throw InvalidParams("two-step solver requires m = 1, got m = " +
                        std::to_string(params.m));
  const auto& d = params.dist;
  const double delta = params.delta;
  const double H0 = d.static_profit(0.0);
  const double C = params.costs[1] - params.costs[0];

  TwoStepReport rep{};
  auto residual = [&](double P) {
    const double W =
        d.static_profit(P) - H0 - (H0 - d.static_profit(-P)) / (1.0 - delta);
    const double r = d.motion(P) - C + delta * W;
    rep.trace.emplace_back(P, r);
    return r;
  };
  const RootResult r = solve_monotone(residual, root);
  rep.P10 = r.root;
  rep.residual = r.residual;
  rep.v11 = H0 / (1.0 - delta);
  rep.v01 = d.static_profit(-r.root) / (1.0 - delta);
  rep.v10 = d.static_profit(r.root) + delta * rep.v11;
  rep.v00 = H0 + delta * rep.v01;
  rep.q10 = d.sf(r.root);
  rep.p10 = params.costs[1] + d.markup(r.root) - delta * (rep.v10 - rep.v11);
  rep.p00 = params.costs[0] + d.markup(0.0) - delta * (rep.v10 - rep.v01);
  return rep;
}

OracleResult value_iteration_oracle(const LbdParams& params,
                                    const OracleOptions& opts) {
  validate(params);
  const int m = params.m;
  const int n = m + 1;
  const auto& d = params.dist;
  const double delta = params.delta;
  const double H0 = d.static_profit(0.0);
  auto cap = [m](int k) { return std::min(k + 1, m); };

  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> P(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [n](std::vector<double>& a, int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };

  std::vector<double> nv(v.size()), nP(P.size());
  int sweeps = 0;
  double change = 0.0;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    change = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double Pij, vij;
        if (i == j) {
          Pij = 0.0;
          vij = H0 + delta * at(v, i, cap(j));
        } else {
          const double W = at(v, cap(i), j) - at(v, i, cap(j)) -
                           at(v, cap(j), i) + at(v, j, cap(i));
          const double rhs =
              unit_cost(params, i) - unit_cost(params, j) - delta * W;
          auto residual = [&d, rhs](double x) { return d.motion(x) - rhs; };
          Pij = solve_monotone(residual, opts.root).root;
          vij = d.static_profit(Pij) + delta * at(v, i, cap(j));
        }
        at(nP, i, j) = Pij;
        at(nv, i, j) = vij;
        change = std::max(change, std::abs(vij - at(v, i, j)));
        change = std::max(change, std::abs(Pij - at(P, i, j)));
      }
    }
    v.swap(nv);
    P.swap(nP);
    sweeps = sweep;
    if (change <= opts.tol) break;
  }
  if (change > opts.tol)
    throw MaxIterExceeded("value iteration did not converge in " +
                              std::to_string(opts.max_sweeps) +
                              " sweeps, last change " + fmt_g12(change),
                          opts.max_sweeps, change);

  LbdEquilibrium eq(m, params);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      eq.P(i, j) = at(P, i, j);
      eq.v(i, j) = at(v, i, j);
    }
  }
  eq.finalize();
  return OracleResult{std::move(eq), sweeps, change};
}

namespace {

int sign_with_tol(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

}  // namespace

DominanceReport dominance_report(const LbdEquilibrium& eq) {
  DominanceReport rep{};
  rep.P10 = eq.P(1, 0);
  rep.drive10 = eq.C(1, 0) - eq.params().delta * eq.W(1, 0);
  rep.leader_advantage = rep.P10 < 0.0;
  rep.sign_consistent = true;
  for (int i = 0; i <= eq.m(); ++i) {
    for (int j = 0; j <= eq.m(); ++j) {
      const double drive = eq.C(i, j) - eq.params().delta * eq.W(i, j);
      const int sp = sign_with_tol(eq.P(i, j), 1e-9);
      const int sd = sign_with_tol(drive, 1e-9);
      if (sp != 0 && sd != 0 && sp != sd) rep.sign_consistent = false;
    }
  }
  return rep;
}

std::vector<HypercompRow> hypercomp_sweep(const std::vector<double>& c1_grid,
                                          double c0, double delta,
                                          const ShockDistribution& dist,
                                          const RootOptions& root) {
  if (c1_grid.empty()) throw InvalidParams("bottom-cost grid is empty");
  for (std::size_t k = 0; k < c1_grid.size(); ++k) {
    if (!std::isfinite(c1_grid[k]))
      throw InvalidParams("bottom-cost grid has a non-finite entry");
    if (c1_grid[k] > c0)
      throw InvalidParams("bottom cost " + fmt_g12(c1_grid[k]) +
                          " exceeds the top cost " + fmt_g12(c0));
    if (k > 0 && !(c1_grid[k] > c1_grid[k - 1]))
      throw InvalidParams("bottom-cost grid must be strictly increasing");
  }

  std::vector<HypercompRow> rows(c1_grid.size());
  parallel_for(static_cast<long long>(c1_grid.size()),
               [&](int, long long lo, long long hi) {
    for (long long k = lo; k < hi; ++k) {
      LbdParams p{1, {c0, c1_grid[static_cast<std::size_t>(k)]}, delta, dist};
      const TwoStepReport r = solve_two_step(p, root);
      rows[static_cast<std::size_t>(k)] =
          HypercompRow{c1_grid[static_cast<std::size_t>(k)], r.v00, r.P10};
    }
  });
  return rows;
}

}  // namespace oligodyn
