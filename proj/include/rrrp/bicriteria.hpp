#pragma once

#include <functional>
#include <vector>

#include "rrrp/lagrangian.hpp"
#include "rrrp/local_search.hpp"
#include "rrrp/model.hpp"

namespace rrrp {

// Telemetry for one exchange pass; exposed so property tests can assert the
// cyclic prefix-sum bound on live runs.
struct ExchangeDiagnostics {
  int k = 0;            // component length
  int start = 0;        // chosen start offset into the component order
  double alpha_sum = 0.0;   // sum of signed edge values, equals -(w gap)
  double max_prefix = 0.0;  // largest cyclic prefix sum from the start
  double gap = 0.0;         // w_lambda(m2) - w_lambda(m1) for this pair
  int trimmed = 0;          // edges kept after the budget trim
  bool returned_m1 = false;
  bool group_dup_dropped = false;
  bool copy_rerouted = false;
  bool copy_at_two = false;
};

using ExchangeObserver = std::function<void(const ExchangeDiagnostics&)>;

// The cyclic-subsequence swap: walks the single component of m1 (+) m2 from a
// start where every cyclic prefix of signed weights is non-positive, keeps
// the longest budget-safe prefix (trimmed to end on an m2 edge), and repairs
// the at-most-one doubled group and at-most-one doubled vertex the cut can
// leave behind.  Output covers every group, stays within budget, and loads at
// most one UGV vertex with 2 UAVs.  Throws std::invalid_argument when the
// difference is not a single component or the budget sides are wrong.
Schedule exchange_step(const RendezvousInstance& inst, const Schedule& m1, const Schedule& m2,
                       double lambda, const ExchangeObserver& observer = {});

inline Schedule exchange_step(const RendezvousInstance& inst, const LagrangianCertificate& cert,
                              const ExchangeObserver& observer = {}) {
  return exchange_step(inst, cert.m1, cert.m2, cert.lambda, observer);
}

struct BicriteriaOptions {
  double epsilon = 1.0;  // in (0, 1]; guess size p = ceil(1/epsilon)
  // Restrict guess candidates to the p * num_groups highest-cost edges.
  // Cuts enumeration sharply but can miss the optimal guess; off by default.
  bool guess_prune = false;
  // When the best candidate double-loads a vertex, fall back to the fully
  // feasible local-search schedule (solve_feasible only).
  bool fallback_on_violation = true;
  ExchangeObserver observer;
};

struct BicriteriaResult {
  Schedule schedule;
  double cost = 0.0;
  double weight = 0.0;
  double lambda = 0.0;  // multiplier of the winning residual search
  double gap = 0.0;     // its bracketing gap (0 when it ended optimal)
  LoadAudit load;
  std::vector<int> guess;  // winning guessed edge ids
  long long guesses_tried = 0;
  bool optimal_shortcut = false;  // winning residual search proved optimality
  bool fallback_used = false;
};

// Guess-and-solve over all group- and copy-disjoint guesses of size
// min(p, num_groups) (plus the empty guess): each guess removes its groups
// and vertices and every edge costing at least its cheapest member (ties by
// edge id), shrinks the budget, and runs the multiplier search plus exchange
// on the residual.  Returns the lowest-cost candidate, ties to the earliest
// in enumeration order.  Throws InfeasibleInstance when no schedule meets the
// budget, std::invalid_argument on bad epsilon.
BicriteriaResult bicriteria_solve(const RendezvousInstance& inst,
                                  const BicriteriaOptions& opts = {});

// The always-feasible schedule of a bracketing pair: local_search's m1.
Schedule feasible_fallback(const RendezvousInstance& inst, const LagrangianCertificate& cert);

// bicriteria_solve plus the violation policy: when the winner double-loads a
// vertex and fallback is enabled, substitutes the feasible schedule and flags
// it in the result.
BicriteriaResult solve_feasible(const RendezvousInstance& inst,
                                const BicriteriaOptions& opts = {});

// The heuristic path used at scale and inside the simulator: multiplier
// search alone, taking the feasible side of the bracket (no guessing, no
// copy violations).  lambda/gap in the result describe the final bracket.
struct PipelineResult {
  Schedule schedule;
  double cost = 0.0;
  double weight = 0.0;
  double lambda = 0.0;
  double gap = 0.0;
  bool optimal = false;  // multiplier search proved global optimality
};

PipelineResult feasible_pipeline(const RendezvousInstance& inst);

}  // namespace rrrp
