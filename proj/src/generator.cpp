#include "rrrp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rrrp/flow.hpp"
#include "rrrp/random.hpp"

namespace rrrp {

RendezvousInstance random_rendezvous(std::uint64_t seed, const InstanceParams& p) {
  if (p.groups < 1 || p.ugv_vertices < 1 || p.edges_per_group < 1)
    throw std::invalid_argument("instance needs >= 1 group, vertex, and edge per group");
  if (!(p.budget_scale >= 0.0)) throw std::invalid_argument("budget_scale must be >= 0");

  SampleRng rng(seed, 0);
  RendezvousInstance inst;
  inst.capacity = p.capacity;
  inst.num_ugv_vertices = p.ugv_vertices + (p.with_nulls ? p.groups : 0);

  double slack = 0.0;
  std::vector<double> weights;
  for (int r = 0; r < p.groups; ++r) {
    inst.uav_groups.push_back({r});
    weights.clear();
    for (int k = 0; k < p.edges_per_group; ++k) {
      Edge e;
      e.u = r;
      e.g = static_cast<int>(rng.u01() * p.ugv_vertices);
      e.cost = 1.0 + 99.0 * rng.u01();
      e.weight = 0.05 + 2.0 * rng.u01();
      e.prob = std::exp(-e.weight);
      inst.edges.push_back(e);
      weights.push_back(e.weight);
    }
    if (p.with_nulls) {
      Edge e;
      e.u = r;
      e.g = p.ugv_vertices + r;
      e.cost = 0.0;
      e.weight = 2.0 + 3.0 * rng.u01();
      e.prob = std::exp(-e.weight);
      inst.edges.push_back(e);
      weights.push_back(e.weight);
    }
    std::sort(weights.begin(), weights.end());
    slack += weights[weights.size() / 2] - weights.front();
  }
  inst.budget = 0.0;
  inst.finalize();
  // Anchor at the tightest weight the copy constraints admit, so scale 0 is
  // exactly feasible and larger scales loosen monotonically.
  inst.budget = weight(inst, min_weight_schedule(inst)) + p.budget_scale * slack;
  return inst;
}

InstanceParams sized_params(long long target_edges) {
  if (target_edges < 2) throw std::invalid_argument("target_edges must be >= 2");
  InstanceParams p;
  p.groups = std::clamp<int>(static_cast<int>(std::lround(std::sqrt(double(target_edges)) / 3.0)),
                             2, 500);
  p.edges_per_group =
      std::max<int>(1, static_cast<int>(target_edges / p.groups) - (p.with_nulls ? 1 : 0));
  p.ugv_vertices = std::max(p.groups, p.edges_per_group);
  return p;
}

}  // namespace rrrp
