#include "rrrp/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrrp/flow.hpp"

namespace rrrp {

double default_dlambda_min(const RendezvousInstance& inst) {
  double c_max = 0.0;
  double a_min = std::numeric_limits<double>::infinity();
  for (const Edge& e : inst.edges) {
    c_max = std::max(c_max, e.cost);
    if (e.weight > 0.0) a_min = std::min(a_min, e.weight);
  }
  if (!std::isfinite(a_min)) a_min = 1.0;  // all-null instance, tolerance moot
  return 1e-6 * std::max(c_max, 1.0) / std::max(a_min, 1e-12);
}

BinarySearchResult binary_search(const RendezvousInstance& inst, double dlambda_min) {
  if (dlambda_min <= 0.0) dlambda_min = default_dlambda_min(inst);

  LagrangianSolver solver(inst);
  BinarySearchResult out;

  {
    Schedule lightest = solver.solve_min_weight();
    ++out.solves;
    double w = weight(inst, lightest);
    if (w > inst.budget + kBudgetSlack)
      throw InfeasibleInstance(w, inst.budget);
  }

  Schedule x = solver.solve(0.0);
  ++out.solves;
  if (weight(inst, x) <= inst.budget + kBudgetSlack) {
    out.shortcut = BinarySearchResult::Shortcut::BudgetSlack;
    out.optimal = std::move(x);
    return out;
  }

  const double inf = std::numeric_limits<double>::infinity();
  Schedule m1, m2 = std::move(x);
  double lambda_lo = 0.0, lambda_hi = inf;
  double lambda = 1.0;

  // Doubling reaches any finite crossover in ~2^k steps; hitting the cap
  // means the subproblem never turned feasible, which the min-weight probe
  // above already ruled out.
  for (int iter = 0; lambda_hi - lambda_lo >= dlambda_min; ++iter) {
    if (iter > 4000) throw std::logic_error("multiplier bisection failed to converge");
    x = solver.solve(lambda);
    ++out.solves;
    double a = weight(inst, x);
    if (std::abs(a - inst.budget) <= kBudgetSlack) {
      out.shortcut = BinarySearchResult::Shortcut::BudgetTight;
      out.optimal = std::move(x);
      return out;
    }
    if (a < inst.budget) {
      m1 = std::move(x);
      lambda_hi = lambda;
    } else {
      m2 = std::move(x);
      lambda_lo = lambda;
    }
    lambda = lambda_hi == inf ? 2.0 * lambda : (lambda_hi + lambda_lo) / 2.0;
  }

  LagrangianCertificate cert;
  cert.lambda = lambda_hi;
  cert.lambda_lo = lambda_lo;
  cert.lambda_hi = lambda_hi;
  cert.gap = std::max(0.0, lagrangian_value(inst, m2, lambda_hi) - lagrangian_value(inst, m1, lambda_hi));
  cert.m1 = std::move(m1);
  cert.m2 = std::move(m2);
  out.certificate = std::move(cert);
  return out;
}

}  // namespace rrrp
