#pragma once

#include <optional>
#include <stdexcept>

#include "rrrp/model.hpp"

namespace rrrp {

// No schedule satisfies the risk budget at all.
struct InfeasibleInstance : std::runtime_error {
  double min_weight;
  double budget;
  InfeasibleInstance(double min_weight, double budget)
      : std::runtime_error("no budget-feasible schedule exists"),
        min_weight(min_weight),
        budget(budget) {}
};

// Bracketing pair delivered by the multiplier bisection: m1 is subproblem
// optimal at lambda (= lambda_hi) and budget-feasible, m2 is optimal at
// lambda_lo and over budget, lambda_hi - lambda_lo < the bisection tolerance.
// gap = w_lambda(m2) - w_lambda(m1) evaluated at lambda; it bounds how far the
// pair is from a common-multiplier tie and is propagated into downstream
// additive error reports.
struct LagrangianCertificate {
  Schedule m1;
  Schedule m2;
  double lambda = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double gap = 0.0;
};

struct BinarySearchResult {
  // Set when a subproblem optimum is provably globally optimal: the lambda=0
  // optimum fit the budget (slack), or some iterate landed exactly on it
  // (tight).
  enum class Shortcut { None, BudgetSlack, BudgetTight };
  Shortcut shortcut = Shortcut::None;
  std::optional<Schedule> optimal;
  std::optional<LagrangianCertificate> certificate;
  int solves = 0;

  bool is_optimal() const { return optimal.has_value(); }
};

// Scale-aware default bisection tolerance: 1e-6 * c_max / a_min_nonzero.
double default_dlambda_min(const RendezvousInstance& inst);

// Multiplier bisection: doubling phase from lambda=1 until a budget-feasible
// subproblem optimum appears, then bisection until the bracket closes below
// dlambda_min (pass 0 for the scale-aware default).  Throws
// InfeasibleInstance when even the minimum-weight schedule is over budget.
BinarySearchResult binary_search(const RendezvousInstance& inst, double dlambda_min = 0.0);

}  // namespace rrrp
