#pragma once

#include <algorithm>
#include <vector>

#include "rrrp/lagrangian.hpp"
#include "rrrp/model.hpp"

namespace rrrp {

// One connected component of the symmetric difference of two schedules, in
// the contracted view where each UAV group is a single node.  Group nodes
// have degree 0 or 2 and UGV vertices degree at most 2 (unit capacity), so
// every component is an alternating path or cycle; paths end at UGV vertices.
struct MergedComponent {
  std::vector<int> m1_edges;  // ascending
  std::vector<int> m2_edges;  // ascending
  bool is_cycle = false;
  // Traversal order: consecutive edges share a contracted node and the sides
  // strictly alternate.  Paths start at the endpoint incident to the lower
  // edge id; cycles start at their lowest edge id, entered from its UGV side.
  std::vector<int> ordered;
  std::vector<bool> from_m2;  // parallel to ordered

  int min_edge() const { return ordered.empty() ? -1 : *std::min_element(ordered.begin(), ordered.end()); }
};

// Decomposes m1 (+) m2.  Requires unit capacity and both schedules one per
// group within copy limits; throws std::invalid_argument otherwise.
// Components are returned sorted by their lowest edge id.
std::vector<MergedComponent> symmetric_difference(const RendezvousInstance& inst,
                                                  const Schedule& m1, const Schedule& m2);

// Applies the component swap: replaces m1's edges with m2's inside comp.
Schedule apply_component(const Schedule& m1, const MergedComponent& comp);

struct LocalSearchResult {
  Schedule m1;
  Schedule m2;
  int absorbed = 0;                     // components folded into m1
  bool m2_replaced = false;             // m2 collapsed to a single swap of m1
  std::vector<double> absorbed_deltas;  // w_lambda added per absorbed component
  double drift = 0.0;                   // total w_lambda added to m1
};

// Merges bracketing schedules until their symmetric difference is a single
// component: a component swap that keeps m1 within budget is absorbed into
// m1, the first one that does not becomes the new m2 (making the difference
// exactly that component).  m1 must be within budget and m2 over it; at the
// certificate multiplier every absorbed delta is >= 0 and their sum is at
// most the certificate gap (up to float noise).
LocalSearchResult local_search(const RendezvousInstance& inst, const Schedule& m1,
                               const Schedule& m2, double lambda);

inline LocalSearchResult local_search(const RendezvousInstance& inst,
                                      const LagrangianCertificate& cert) {
  return local_search(inst, cert.m1, cert.m2, cert.lambda);
}

}  // namespace rrrp
