#pragma once

#include <cstdint>

#include "rrrp/model.hpp"

namespace rrrp {

// Random instance family used by the benchmark harness and stress tests:
// every group gets edges_per_group real edges to uniform vertices with
// cost ~ U[1, 100] and weight ~ U[0.05, 2.05], plus a zero-cost null edge on
// a dedicated vertex when with_nulls is set.
struct InstanceParams {
  int groups = 6;
  int ugv_vertices = 8;
  int edges_per_group = 5;
  // 0 leaves only the minimum-weight schedule feasible; 1 admits the
  // per-group median weights.  The budget interpolates between those sums.
  double budget_scale = 0.5;
  int capacity = 1;
  bool with_nulls = true;
};

RendezvousInstance random_rendezvous(std::uint64_t seed, const InstanceParams& p);

// Picks groups/vertices/edges so the instance carries about target_edges
// edges, keeping the group count near the square root of the total.
InstanceParams sized_params(long long target_edges);

}  // namespace rrrp
