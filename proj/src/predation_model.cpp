#include "oligodyn/predation_model.hpp"

#include <cmath>
#include <sstream>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"

namespace oligodyn {

void validate(const PredationParams& params) {
  validate(params.base);
  if (params.base.m != 1)
    throw InvalidParams("exit-threat analysis requires m = 1, got m = " +
                        std::to_string(params.base.m));
  if (!std::isfinite(params.v_mono))
    throw InvalidParams("monopoly continuation value must be finite");
}

PredationReport predation_report(const PredationParams& params,
                                 const RootOptions& root) {
  validate(params);
  const auto& d = params.base.dist;
  const double delta = params.base.delta;
  const double C = params.base.costs[1] - params.base.costs[0];

  PredationReport rep{};
  rep.v11 = d.static_profit(0.0) / (1.0 - delta);
  // The swing needs no root solve; it is a closed form of primitives, so it
  // cannot depend on how the pricing roots below are bracketed.
  rep.W_tilde = params.v_mono - 2.0 * rep.v11;

  const double rhs_tilde = C - delta * rep.W_tilde;
  auto residual_tilde = [&d, rhs_tilde](double P) { return d.motion(P) - rhs_tilde; };
  rep.P_tilde = solve_monotone(residual_tilde, root).root;

  rep.P_hat = solve_two_step(params.base, root).P10;

  rep.p_tilde_10 = params.base.costs[1] + d.markup(rep.P_tilde) -
                   delta * (params.v_mono - rep.v11);
  rep.predation = rep.P_tilde < rep.P_hat;
  rep.entry = d.static_profit(0.0) > 0.0;
  rep.below_cost = rep.p_tilde_10 < params.base.costs[1];
  return rep;
}

std::string format_table(const PredationReport& report) {
  std::ostringstream os;
  os << "symmetric duopoly value   " << fmt_g12(report.v11) << "\n"
     << "continuation swing        " << fmt_g12(report.W_tilde) << "\n"
     << "pricing state (exit)      " << fmt_g12(report.P_tilde) << "\n"
     << "pricing state (benchmark) " << fmt_g12(report.P_hat) << "\n"
     << "leader price (exit)       " << fmt_g12(report.p_tilde_10) << "\n"
     << "more aggressive pricing   " << (report.predation ? "yes" : "no") << "\n"
     << "entry stays profitable    " << (report.entry ? "yes" : "no") << "\n"
     << "price below unit cost     " << (report.below_cost ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace oligodyn
