#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oligodyn/lbd_model.hpp"
#include "oligodyn/switching_model.hpp"

namespace oligodyn {

/**
 * Seeded Monte Carlo playout of a solved equilibrium.  Replication r draws
 * from its own generator seeded by a splitmix64 substream of the base seed,
 * so results are bitwise reproducible and independent of the worker-thread
 * count; all statistics accumulate in integers until the final division.
 */
struct SimConfig {
  int periods = 1;
  long long reps = 1;
  std::uint64_t seed = 0;
  int initial_i = 0;  // starting state; for the switching model (1,0) or (0,1)
  int initial_j = 0;  //   marks which firm holds the customer
  bool xi_mode = false;  // draw the shock itself and compare to the threshold
  bool record_trajectories = false;
};

struct StateTally {
  long long visits = 0;
  long long wins = 0;  // firm 1 sales from this state
};

struct TrajectoryRow {
  long long rep;
  int period;  // 1-based
  int i, j;    // state at the start of the period
  int winner;  // 1 or 2
};

struct SimResult {
  long long reps = 0;
  int periods = 0;
  long long first_period_wins = 0;  // firm 1 sales in period 1
  double first_period_win_rate = 0.0;
  std::vector<std::pair<int, int>> state_labels;   // index -> (i, j)
  std::vector<std::vector<long long>> occupancy;   // [period][state], start of period
  std::vector<StateTally> state_tallies;           // [state]
  long long dominance_wins = 0;  // period-1 winner strictly ahead at the horizon
  double dominance_prob = 0.0;   // dominance_wins / reps
  double mean_lead = 0.0;        // mean terminal sales lead of the period-1 winner
  double retention_rate;         // insider keeps the sale (switching); NaN otherwise
  std::vector<TrajectoryRow> trajectories;
};

SimResult simulate_lbd(const LbdEquilibrium& eq, const SimConfig& cfg);
SimResult simulate_switching(const SwitchingEq& eq, const SimConfig& cfg);

}  // namespace oligodyn
