#pragma once

#include <string>
#include <vector>

namespace rrrp {

// Absolute slack used for budget and weight comparisons throughout.
inline constexpr double kBudgetSlack = 1e-9;

// Floor applied to success probabilities before taking logs.
inline constexpr double kProbFloor = 1e-12;

// One candidate detour assignment: UAV-side vertex u recharges at UGV-side
// vertex g.  cost is overhead seconds, prob the joint success probability,
// weight = ln(1/prob) >= 0.
struct Edge {
  int u = -1;
  int g = -1;
  double cost = 0.0;
  double weight = 0.0;
  double prob = 1.0;
};

double weight_from_prob(double prob);

// Provenance of one UGV-side vertex: which UGV, which discretization step,
// which capacity copy.  Null slots absorb the "skip recharging" choice of one
// UAV group.
struct UgvSlot {
  int ugv = -1;
  int step = -1;       // discretization index along the UGV tour
  int copy = 0;        // in [0, capacity)
  bool null_slot = false;
  int null_uav = -1;   // owning group for null slots
  double arrive_s = 0.0;  // UGV arrival time at this vertex
  double arc = 0.0;       // arc position on the UGV tour
};

struct RendezvousInstance {
  // Group r lists the UAV-side vertex ids UAV r may depart from (its on-tour
  // departure options plus, for built instances, one null vertex).
  std::vector<std::vector<int>> uav_groups;
  int num_ugv_vertices = 0;
  std::vector<Edge> edges;
  double budget = 0.0;  // ln(1/rho)
  int capacity = 1;     // UAVs a UGV vertex may serve (copies per vertex)

  // Optional provenance, aligned with UGV vertex ids; empty for abstract
  // instances (loaded files, reductions, random tests).
  std::vector<UgvSlot> copy_map;

  // Derived indices, filled by finalize().
  int num_uav_vertices = 0;
  std::vector<int> group_of_uav;            // uav vertex -> group
  std::vector<int> edge_group;              // edge id -> group
  std::vector<std::vector<int>> group_edges;  // group -> edge ids, ascending

  int num_groups() const { return static_cast<int>(uav_groups.size()); }

  // Builds the derived indices and checks structural invariants: dense
  // disjoint groups, valid edge endpoints, cost >= 0, prob in (0,1] with
  // weight = ln(1/prob) to 1e-12 relative, budget >= 0, capacity >= 1, and
  // every group incident to at least one edge.  Throws std::invalid_argument.
  void finalize();
};

// A schedule is a set of edge ids, kept sorted ascending.
struct Schedule {
  std::vector<int> edges;

  Schedule() = default;
  explicit Schedule(std::vector<int> ids);

  bool operator==(const Schedule&) const = default;
};

double cost(const RendezvousInstance& inst, const Schedule& s);
double weight(const RendezvousInstance& inst, const Schedule& s);
// Lagrangian objective c(s) + lambda * a(s).
double lagrangian_value(const RendezvousInstance& inst, const Schedule& s, double lambda);

struct FeasibilityReport {
  bool feasible = false;
  bool one_per_group = false;
  bool copies_ok = false;
  bool budget_ok = false;
  double weight = 0.0;
  double budget = 0.0;
  std::vector<int> bad_groups;   // groups with != 1 chosen edge
  std::vector<int> over_copies;  // UGV vertices chosen more than once
};

FeasibilityReport is_feasible(const RendezvousInstance& inst, const Schedule& s);

// Like is_feasible but tolerates UGV vertices serving up to `max_copy_load`
// UAVs; used to audit bicriteria outputs (load <= 2, at most one vertex at 2).
struct LoadAudit {
  int max_load = 0;
  int vertices_at_two = 0;
  int vertices_above_two = 0;
};
LoadAudit audit_copy_load(const RendezvousInstance& inst, const Schedule& s);

// JSON serialization.  Stores probabilities; weights are recomputed on load.
std::string to_json(const RendezvousInstance& inst, int indent = 2);
RendezvousInstance instance_from_json(const std::string& text);
RendezvousInstance load_instance(const std::string& path);
void save_instance(const RendezvousInstance& inst, const std::string& path);

}  // namespace rrrp
