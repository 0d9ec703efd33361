#include "oligodyn/market_sim.hpp"

#include <cmath>
#include <random>
#include <string>

#include "oligodyn/errors.hpp"
#include "oligodyn/parallel.hpp"

namespace oligodyn {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent generator per replication: reps can be partitioned across
// threads in any way without changing any draw.
std::mt19937_64 rep_generator(std::uint64_t seed, long long rep) {
  return std::mt19937_64(
      splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep + 1))));
}

double next_u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void validate_common(const SimConfig& cfg) {
  if (cfg.periods < 1 || cfg.periods > 1000000)
    throw InvalidParams("periods must lie in [1, 1e6], got " +
                        std::to_string(cfg.periods));
  if (cfg.reps < 1 || cfg.reps > 1000000000LL)
    throw InvalidParams("replications must lie in [1, 1e9], got " +
                        std::to_string(cfg.reps));
  if (cfg.record_trajectories &&
      cfg.reps * static_cast<long long>(cfg.periods) > 10000000LL)
    throw InvalidParams("trajectory recording is capped at 1e7 rows; "
                        "reduce reps or periods");
}

struct Tallies {
  std::vector<std::vector<long long>> occ;  // [period][state]
  std::vector<StateTally> states;
  long long first_wins = 0;
  long long dom_wins = 0;
  long long lead_sum = 0;
  long long retained = 0;

  Tallies(int periods, std::size_t n_states)
      : occ(periods, std::vector<long long>(n_states, 0)), states(n_states) {}

  void merge(const Tallies& o) {
    for (std::size_t t = 0; t < occ.size(); ++t)
      for (std::size_t s = 0; s < occ[t].size(); ++s) occ[t][s] += o.occ[t][s];
    for (std::size_t s = 0; s < states.size(); ++s) {
      states[s].visits += o.states[s].visits;
      states[s].wins += o.states[s].wins;
    }
    first_wins += o.first_wins;
    dom_wins += o.dom_wins;
    lead_sum += o.lead_sum;
    retained += o.retained;
  }
};

}  // namespace

SimResult simulate_lbd(const LbdEquilibrium& eq, const SimConfig& cfg) {
  validate_common(cfg);
  const int m = eq.m();
  const int n = m + 1;
  if (cfg.initial_i < 0 || cfg.initial_i > m || cfg.initial_j < 0 ||
      cfg.initial_j > m)
    throw InvalidParams("initial state outside the experience grid");

  const std::size_t n_states = static_cast<std::size_t>(n) * n;
  const auto& dist = eq.params().dist;

  SimResult out;
  out.reps = cfg.reps;
  out.periods = cfg.periods;
  out.state_labels.reserve(n_states);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.state_labels.emplace_back(i, j);
  if (cfg.record_trajectories)
    out.trajectories.resize(static_cast<std::size_t>(cfg.reps) *
                            static_cast<std::size_t>(cfg.periods));

  std::vector<Tallies> parts(static_cast<std::size_t>(plan_workers(cfg.reps)),
                             Tallies(cfg.periods, n_states));

  parallel_for(cfg.reps, [&](int worker, long long lo, long long hi) {
    Tallies& tl = parts[static_cast<std::size_t>(worker)];
    for (long long r = lo; r < hi; ++r) {
      std::mt19937_64 gen = rep_generator(cfg.seed, r);
      int i = cfg.initial_i, j = cfg.initial_j;
      long long si = 0, sj = 0;
      int first = 0;
      for (int t = 0; t < cfg.periods; ++t) {
        const std::size_t s = static_cast<std::size_t>(i) * n + j;
        ++tl.occ[t][s];
        ++tl.states[s].visits;
        const double u = next_u01(gen);
        const bool a_wins =
            cfg.xi_mode ? dist.quantile(u) > eq.P(i, j) : u < eq.q(i, j);
        if (cfg.record_trajectories)
          out.trajectories[static_cast<std::size_t>(r) * cfg.periods + t] =
              TrajectoryRow{r, t + 1, i, j, a_wins ? 1 : 2};
        if (a_wins) {
          ++tl.states[s].wins;
          ++si;
          i = std::min(i + 1, m);
          if (first == 0) first = 1;
        } else {
          ++sj;
          j = std::min(j + 1, m);
          if (first == 0) first = 2;
        }
      }
      if (first == 1) ++tl.first_wins;
      const long long lead = first == 1 ? si - sj : sj - si;
      if (lead > 0) ++tl.dom_wins;
      tl.lead_sum += lead;
    }
  });

  Tallies total(cfg.periods, n_states);
  for (const Tallies& part : parts) total.merge(part);
  out.occupancy = std::move(total.occ);
  out.state_tallies = std::move(total.states);
  out.first_period_wins = total.first_wins;
  out.first_period_win_rate =
      static_cast<double>(total.first_wins) / static_cast<double>(cfg.reps);
  out.dominance_wins = total.dom_wins;
  out.dominance_prob =
      static_cast<double>(total.dom_wins) / static_cast<double>(cfg.reps);
  out.mean_lead =
      static_cast<double>(total.lead_sum) / static_cast<double>(cfg.reps);
  out.retention_rate = std::nan("");
  return out;
}

SimResult simulate_switching(const SwitchingEq& eq, const SimConfig& cfg) {
  validate_common(cfg);
  const bool start_a = cfg.initial_i == 1 && cfg.initial_j == 0;
  const bool start_b = cfg.initial_i == 0 && cfg.initial_j == 1;
  if (!start_a && !start_b)
    throw InvalidParams("switching simulation starts at (1,0) or (0,1): "
                        "one firm holds the customer");

  SimResult out;
  out.reps = cfg.reps;
  out.periods = cfg.periods;
  out.state_labels = {{1, 0}, {0, 1}};  // index 0: firm 1 holds the customer
  if (cfg.record_trajectories)
    out.trajectories.resize(static_cast<std::size_t>(cfg.reps) *
                            static_cast<std::size_t>(cfg.periods));

  std::vector<Tallies> parts(static_cast<std::size_t>(plan_workers(cfg.reps)),
                             Tallies(cfg.periods, 2));

  parallel_for(cfg.reps, [&](int worker, long long lo, long long hi) {
    Tallies& tl = parts[static_cast<std::size_t>(worker)];
    for (long long r = lo; r < hi; ++r) {
      std::mt19937_64 gen = rep_generator(cfg.seed, r);
      bool a_holds = start_a;
      long long si = 0, sj = 0;
      int first = 0;
      for (int t = 0; t < cfg.periods; ++t) {
        const std::size_t s = a_holds ? 0 : 1;
        ++tl.occ[t][s];
        ++tl.states[s].visits;
        const double u = next_u01(gen);
        const bool keeps =
            cfg.xi_mode ? eq.dist.quantile(u) > eq.x : u < eq.q1;
        const bool a_sells = a_holds ? keeps : !keeps;
        if (keeps) ++tl.retained;
        if (cfg.record_trajectories)
          out.trajectories[static_cast<std::size_t>(r) * cfg.periods + t] =
              TrajectoryRow{r, t + 1, a_holds ? 1 : 0, a_holds ? 0 : 1,
                            a_sells ? 1 : 2};
        if (a_sells) {
          ++tl.states[s].wins;
          ++si;
          if (first == 0) first = 1;
        } else {
          ++sj;
          if (first == 0) first = 2;
        }
        a_holds = a_sells;
      }
      if (first == 1) ++tl.first_wins;
      const long long lead = first == 1 ? si - sj : sj - si;
      if (lead > 0) ++tl.dom_wins;
      tl.lead_sum += lead;
    }
  });

  Tallies total(cfg.periods, 2);
  for (const Tallies& part : parts) total.merge(part);
  out.occupancy = std::move(total.occ);
  out.state_tallies = std::move(total.states);
  out.first_period_wins = total.first_wins;
  out.first_period_win_rate =
      static_cast<double>(total.first_wins) / static_cast<double>(cfg.reps);
  out.dominance_wins = total.dom_wins;
  out.dominance_prob =
      static_cast<double>(total.dom_wins) / static_cast<double>(cfg.reps);
  out.mean_lead =
      static_cast<double>(total.lead_sum) / static_cast<double>(cfg.reps);
  out.retention_rate =
      static_cast<double>(total.retained) /
      (static_cast<double>(cfg.reps) * static_cast<double>(cfg.periods));
  return out;
}

}  // namespace oligodyn
