#include "ssbc/adjust.hpp"

#include <cmath>

namespace ssbc {

namespace {

struct RungEval {
  double tail;
  double violation;
};

RungEval evaluate_rung(int u, const CalibrationContext& ctx, const CoverageRegime& regime) {
  const CoverageLaw law = coverage_law_at_rung(u, ctx.n, regime);
  const double violation = violation_prob(law, ctx.alpha_target);
  return {1.0 - violation, violation};
}

bool passes(const RungEval& e, double delta) { return e.tail >= 1.0 - delta; }

AdjustmentReport base_report(const CalibrationContext& ctx, const CoverageRegime& regime,
                             Method method) {
  AdjustmentReport rep;
  rep.method = method;
  rep.context = ctx;
  rep.regime = regime;
  return rep;
}

void mark_feasible(AdjustmentReport& rep, int u, const RungEval& e) {
  rep.feasible = true;
  rep.u_star = u;
  rep.alpha_adj = u / (rep.context.n + 1.0);
  rep.achieved_tail = e.tail;
  rep.achieved_violation = e.violation;
}

void mark_infeasible(AdjustmentReport& rep, int u_max) {
  const RungEval best = evaluate_rung(1, rep.context, rep.regime);
  rep.feasible = false;
  rep.u_star = 0;
  rep.alpha_adj.reset();
  rep.achieved_tail = best.tail;
  rep.achieved_violation = best.violation;
  if (u_max < 1) {
    rep.notes.push_back("no grid level u/(n+1) lies below alpha_target");
  } else {
    rep.notes.push_back("rung u=1 reaches tail " + std::to_string(best.tail) +
                        " < 1 - delta");
  }
}

}  // namespace

std::string to_string(Method method) { return method == Method::SSBC ? "ssbc" : "dkwm"; }

AdjustmentReport ssbc_adjust(const CalibrationContext& ctx, const CoverageRegime& regime) {
  ctx.validate();
  AdjustmentReport rep = base_report(ctx, regime, Method::SSBC);
  const int u_max = largest_rung_below(ctx.alpha_target, ctx.n);
  for (int u = u_max; u >= 1; --u) {
    const RungEval e = evaluate_rung(u, ctx, regime);
    if (passes(e, ctx.delta)) {
      mark_feasible(rep, u, e);
      return rep;
    }
  }
  mark_infeasible(rep, u_max);
  return rep;
}

AdjustmentReport ssbc_adjust_full_scan(const CalibrationContext& ctx,
                                       const CoverageRegime& regime) {
  ctx.validate();
  AdjustmentReport rep = base_report(ctx, regime, Method::SSBC);
  const int u_max = largest_rung_below(ctx.alpha_target, ctx.n);
  for (int u = 1; u <= ctx.n; ++u) {
    if (u > u_max) break;
    const RungEval e = evaluate_rung(u, ctx, regime);
    if (passes(e, ctx.delta)) mark_feasible(rep, u, e);
  }
  if (!rep.feasible) mark_infeasible(rep, u_max);
  return rep;
}

double dkwm_epsilon(int n, double delta) {
  CalibrationContext{n, 0.5, delta}.validate();
  return std::sqrt(std::log(1.0 / delta) / (2.0 * n));
}

AdjustmentReport dkwm_adjust(const CalibrationContext& ctx) {
  ctx.validate();
  AdjustmentReport rep = base_report(ctx, CoverageRegime::infinite(), Method::DKWM);
  const double eps = dkwm_epsilon(ctx.n, ctx.delta);
  rep.epsilon = eps;
  const double alpha_adj = ctx.alpha_target - eps;
  if (!(alpha_adj > 0.0)) {
    rep.feasible = false;
    rep.notes.push_back("epsilon " + std::to_string(eps) + " >= alpha_target");
    return rep;
  }
  rep.feasible = true;
  rep.alpha_adj = alpha_adj;
  const int k = order_index(alpha_adj, ctx.n);
  rep.u_star = ctx.n + 1 - k;
  if (k == ctx.n + 1) {
    rep.achieved_tail = 1.0;
    rep.achieved_violation = 0.0;
    rep.notes.push_back("order index k = n+1: the conformal set is the whole space");
    return rep;
  }
  const RungEval e = evaluate_rung(rep.u_star, ctx, rep.regime);
  rep.achieved_tail = e.tail;
  rep.achieved_violation = e.violation;
  return rep;
}

}  // namespace ssbc
