#pragma once

#include <string>

#include "oligodyn/lbd_model.hpp"
#include "oligodyn/scalar_root.hpp"
#include "oligodyn/shock_dist.hpp"

namespace oligodyn {

/**
 * Exit-threat limit of the two-step duopoly: the laggard exits after losing,
 * so the leader's continuation swings between the monopoly payoff v_mono and
 * the symmetric duopoly value.  Exposes the predatory price test against the
 * no-exit benchmark threshold.
 */
struct PredationParams {
  LbdParams base;  // must have m == 1
  double v_mono;   // leader continuation value after the rival exits
};

void validate(const PredationParams& params);

struct PredationReport {
  double v11;        // symmetric duopoly continuation H(0)/(1 - delta)
  double W_tilde;    // v_mono - 2 v11: continuation swing under exit
  double P_tilde;    // pricing state under the exit threat
  double P_hat;      // benchmark pricing state without exit
  double p_tilde_10; // leader price under the exit threat
  bool predation;    // P_tilde < P_hat: strictly more aggressive than benchmark
  bool entry;        // flow profit at symmetric pricing stays positive
  bool below_cost;   // p_tilde_10 < leader unit cost
};

PredationReport predation_report(const PredationParams& params,
                                 const RootOptions& root = {});

/** Plain-text table of the report, one quantity per line. */
std::string format_table(const PredationReport& report);

}  // namespace oligodyn
