#pragma once

#include <utility>
#include <vector>

#include "oligodyn/scalar_root.hpp"
#include "oligodyn/shock_dist.hpp"

namespace oligodyn {

/**
 * Duopoly with learning-by-doing: each sale moves the winner one step down a
 * cost ladder until the experience cap m. State (i, j) holds both firms'
 * experience levels, each in 0..m.
 */
struct LbdParams {
  int m;                      // experience cap, >= 1
  std::vector<double> costs;  // size m+1, nonincreasing, strict before the cap
  double delta;               // discount factor in [0, 1)
  ShockDistribution dist = ShockDistribution::standard_normal();
};

/** Throws InvalidParams if the parameter block is unusable. */
void validate(const LbdParams& params);

/** Unit cost at experience i, with the cap applied: c(min(i, m)). */
double unit_cost(const LbdParams& params, int i);

struct LbdOptions {
  RootOptions root;
  bool uniqueness_check = true;  // residual scan per solved state
  double scan_lo = -50.0;
  double scan_hi = 50.0;
  double scan_step = 0.05;
};

/**
 * Markov-perfect equilibrium tables over the (m+1)^2 state grid.
 * P is the price-gap state variable that clears the sale lottery: firm 1 wins
 * with probability 1 - F(P).  All accessors take (i, j) = (own, rival)
 * experience from firm 1's perspective.
 */
class LbdEquilibrium {
 public:
  LbdEquilibrium(int m, LbdParams params);

  int m() const { return m_; }
  int n() const { return m_ + 1; }  // states per firm
  const LbdParams& params() const { return params_; }

  double P(int i, int j) const { return P_[idx(i, j)]; }
  double p(int i, int j) const { return p_[idx(i, j)]; }  // firm 1 price
  double q(int i, int j) const { return q_[idx(i, j)]; }  // firm 1 win probability
  double v(int i, int j) const { return v_[idx(i, j)]; }  // firm 1 value
  double w(int i, int j) const { return w_[idx(i, j)]; }  // v(i+,j) - v(i,j+)
  double W(int i, int j) const { return W_[idx(i, j)]; }  // w(i,j) - w(j,i)
  double C(int i, int j) const { return C_[idx(i, j)]; }  // c(i) - c(j)
  double root_residual(int i, int j) const { return res_[idx(i, j)]; }
  double bellman_residual(int i, int j) const { return bres_[idx(i, j)]; }

  double& P(int i, int j) { return P_[idx(i, j)]; }
  double& v(int i, int j) { return v_[idx(i, j)]; }
  double& root_residual(int i, int j) { return res_[idx(i, j)]; }

  /** Recomputes p, q, w, W, C and the Bellman residual from P and v. */
  void finalize();

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_ + 1) +
           static_cast<std::size_t>(j);
  }
  int m_;
  LbdParams params_;
  std::vector<double> P_, p_, q_, v_, w_, W_, C_, res_, bres_;
};

/**
 * Backward induction over total experience i+j, from the absorbing cap state
 * down.  Diagonal states price at P = 0; off-diagonal states solve the
 * scalar equation motion(P) = C - delta*W, where the cap edge i = m folds the
 * two same-total unknowns into the residual via the value recursion.
 */
LbdEquilibrium solve_backward(const LbdParams& params, const LbdOptions& opts = {});

/** Closed-form two-step (m = 1) solution driven by one scalar root. */
struct TwoStepReport {
  double P10;
  double v11, v01, v10, v00;
  double p10, p00;
  double q10;
  double residual;
  std::vector<std::pair<double, double>> trace;  // residual evaluations (P, R)
};

TwoStepReport solve_two_step(const LbdParams& params, const RootOptions& root = {});

/**
 * Independent cross-check: Jacobi-style value iteration from v = 0, P = 0,
 * re-solving every state's pricing condition against the stale value table
 * each sweep.  Shares no induction order or cap closure with solve_backward.
 */
struct OracleOptions {
  double tol = 1e-8;  // sup-norm change across a sweep
  int max_sweeps = 100000;
  RootOptions root;
};

struct OracleResult {
  LbdEquilibrium eq;
  int sweeps;
  double final_change;
};

OracleResult value_iteration_oracle(const LbdParams& params,
                                    const OracleOptions& opts = {});

/** Leader-advantage diagnostics for a solved equilibrium. */
struct DominanceReport {
  bool leader_advantage;  // P(1,0) < 0: the leader prices to extend its lead
  bool sign_consistent;   // sign(P) matches sign(C - delta*W) at every state
  double P10;
  double drive10;  // C - delta*W at state (1,0)
};

DominanceReport dominance_report(const LbdEquilibrium& eq);

/** Hyper-competition sweep: re-solve the m = 1 model over a grid of bottom
    costs c(1) and track entry value v(0,0) and the pricing gap P(1,0). */
struct HypercompRow {
  double c1;
  double v00;
  double P10;
};

std::vector<HypercompRow> hypercomp_sweep(const std::vector<double>& c1_grid,
                                          double c0, double delta,
                                          const ShockDistribution& dist,
                                          const RootOptions& root = {});

}  // namespace oligodyn
