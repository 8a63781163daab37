#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "rrrp/model.hpp"

namespace rrrp {

// Arc cost ordered lexicographically: primary first, then tie.  Solving over
// this ordered group makes the flow minimize the primary total and, among
// those optima, the tie total.  The rendezvous reduction uses
// (c + lambda*a, a), so among all w_lambda-minimal schedules the solver
// returns one of minimal weight; remaining ties fall to the deterministic arc
// scan order (ascending edge id).
struct ArcCost {
  double primary = 0.0;
  double tie = 0.0;
};

inline ArcCost operator+(ArcCost x, ArcCost y) { return {x.primary + y.primary, x.tie + y.tie}; }
inline ArcCost operator-(ArcCost x, ArcCost y) { return {x.primary - y.primary, x.tie - y.tie}; }
inline bool operator<(ArcCost x, ArcCost y) {
  if (x.primary != y.primary) return x.primary < y.primary;
  return x.tie < y.tie;
}
inline bool operator==(ArcCost x, ArcCost y) { return x.primary == y.primary && x.tie == y.tie; }

// Unit-capacity friendly min-cost-flow network.  Arc costs must be
// lexicographically non-negative (no negative-cost cycles can then exist).
struct FlowNetwork {
  struct Arc {
    int from = 0;
    int to = 0;
    int cap = 0;
    ArcCost cost;
    int tag = -1;  // caller label, e.g. instance edge id
  };

  int num_nodes = 0;
  int source = 0;
  int sink = 0;
  int required_flow = 0;
  std::vector<Arc> arcs;

  FlowNetwork() = default;
  FlowNetwork(int nodes, int source, int sink, int required)
      : num_nodes(nodes), source(source), sink(sink), required_flow(required) {}

  int add_arc(int from, int to, int cap, ArcCost cost, int tag = -1);

  // The Lemma-style rendezvous network: source -> one aggregator per UAV
  // group -> that group's departure vertices -> UGV vertices via instance
  // edges costed (c + lambda*a, a) -> sink; capacities 1 except the sink arcs
  // which carry the vertex capacity, required flow = number of groups.
  // Integral flows of that value correspond one-to-one to schedules with one
  // edge per group and UGV vertices within capacity.
  static FlowNetwork from_instance(const RendezvousInstance& inst, double lambda);
};

struct FlowInfeasible : std::runtime_error {
  int achieved;
  int required;
  FlowInfeasible(int achieved, int required)
      : std::runtime_error("required flow exceeds max flow"), achieved(achieved), required(required) {}
};

struct MinCostFlowResult {
  ArcCost total;
  int flow_value = 0;
  std::vector<int> arc_flow;  // per network arc
};

// Successive shortest augmenting paths with Dijkstra labels and node
// potentials, early sink termination; O(F * E log V) for F units of required
// flow.  Throws FlowInfeasible when the network cannot carry required_flow.
MinCostFlowResult min_cost_flow(const FlowNetwork& net);

// Caches the rendezvous network topology of one instance so that repeated
// Lagrangian solves only rewrite arc costs.
class LagrangianSolver {
 public:
  explicit LagrangianSolver(const RendezvousInstance& inst);
  ~LagrangianSolver();
  LagrangianSolver(LagrangianSolver&&) noexcept;
  LagrangianSolver& operator=(LagrangianSolver&&) noexcept;

  // Minimizes c(x) + lambda * a(x) over schedules (ties: minimal weight).
  Schedule solve(double lambda);
  // Minimizes a(x) (ties: minimal cost); the feasibility probe.
  Schedule solve_min_weight();

  const RendezvousInstance& instance() const { return *inst_; }

 private:
  const RendezvousInstance* inst_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot wrappers.
Schedule solve_lagrangian(const RendezvousInstance& inst, double lambda);
Schedule min_weight_schedule(const RendezvousInstance& inst);

}  // namespace rrrp
