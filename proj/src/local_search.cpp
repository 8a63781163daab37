#include "rrrp/local_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace rrrp {

namespace {

void require_valid_pair(const RendezvousInstance& inst, const Schedule& m1, const Schedule& m2) {
  if (inst.capacity != 1)
    throw std::invalid_argument("symmetric difference requires unit vertex capacity");
  for (const Schedule* s : {&m1, &m2}) {
    FeasibilityReport rep = is_feasible(inst, *s);
    if (!rep.one_per_group || !rep.copies_ok)
      throw std::invalid_argument("schedule is not one-per-group within copy limits");
  }
}

}  // namespace

std::vector<MergedComponent> symmetric_difference(const RendezvousInstance& inst,
                                                  const Schedule& m1, const Schedule& m2) {
  require_valid_pair(inst, m1, m2);

  std::vector<int> diff;
  std::set_symmetric_difference(m1.edges.begin(), m1.edges.end(), m2.edges.begin(),
                                m2.edges.end(), std::back_inserter(diff));

  // contracted node ids: group r -> r, UGV vertex g -> na + g.  Group nodes
  // have degree 0 or 2, UGV vertices at most 1 per side, so every component
  // is a simple alternating path or cycle.
  const int na = inst.num_groups();
  std::vector<std::vector<int>> incident(na + inst.num_ugv_vertices);
  for (int e : diff) {
    incident[inst.edge_group[e]].push_back(e);
    incident[na + inst.edges[e].g].push_back(e);
  }

  auto grp_node = [&](int e) { return inst.edge_group[e]; };
  auto ugv_node = [&](int e) { return na + inst.edges[e].g; };
  auto other_end = [&](int e, int node) { return node == grp_node(e) ? ugv_node(e) : grp_node(e); };

  std::vector<bool> in_m2(inst.edges.size(), false);
  for (int e : m2.edges) in_m2[e] = true;

  std::vector<bool> visited(inst.edges.size(), false);
  std::vector<bool> used(inst.edges.size(), false);

  // Ordered traversal from a starting edge entered at `entry`; consecutive
  // edges share the node the walk pivots on.
  auto walk = [&](int start, int entry) {
    std::vector<int> order;
    int e = start, node = entry;
    while (e != -1 && !used[e]) {
      used[e] = true;
      order.push_back(e);
      node = other_end(e, node);
      int next = -1;
      for (int cand : incident[node]) {
        if (!used[cand]) next = cand;
      }
      e = next;
    }
    for (int id : order) used[id] = false;
    return order;
  };

  std::vector<MergedComponent> comps;
  for (int e0 : diff) {
    if (visited[e0]) continue;

    // component edge set via BFS on the contracted nodes
    std::vector<int> stack = {e0};
    visited[e0] = true;
    std::vector<int> comp_edges;
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      comp_edges.push_back(e);
      for (int node : {grp_node(e), ugv_node(e)}) {
        for (int nb : incident[node]) {
          if (!visited[nb]) {
            visited[nb] = true;
            stack.push_back(nb);
          }
        }
      }
    }

    // endpoints are the degree-1 nodes; none means a cycle
    std::vector<int> ends;
    for (int e : comp_edges) {
      for (int node : {grp_node(e), ugv_node(e)}) {
        if (incident[node].size() == 1) ends.push_back(node);
      }
    }

    MergedComponent comp;
    if (ends.empty()) {
      comp.is_cycle = true;
      int e_min = *std::min_element(comp_edges.begin(), comp_edges.end());
      comp.ordered = walk(e_min, ugv_node(e_min));
    } else {
      // both endpoints are UGV vertices; start at the one whose single
      // incident edge has the lower id
      int best_node = -1, best_edge = -1;
      for (int node : ends) {
        int e = incident[node][0];
        if (best_edge == -1 || e < best_edge) {
          best_edge = e;
          best_node = node;
        }
      }
      comp.ordered = walk(best_edge, best_node);
    }

    comp.from_m2.reserve(comp.ordered.size());
    for (int e : comp.ordered) {
      comp.from_m2.push_back(in_m2[e]);
      (in_m2[e] ? comp.m2_edges : comp.m1_edges).push_back(e);
    }
    std::sort(comp.m1_edges.begin(), comp.m1_edges.end());
    std::sort(comp.m2_edges.begin(), comp.m2_edges.end());
    comps.push_back(std::move(comp));
  }

  std::sort(comps.begin(), comps.end(), [](const MergedComponent& x, const MergedComponent& y) {
    return x.min_edge() < y.min_edge();
  });
  return comps;
}

Schedule apply_component(const Schedule& m1, const MergedComponent& comp) {
  std::vector<int> out;
  std::set_difference(m1.edges.begin(), m1.edges.end(), comp.m1_edges.begin(),
                      comp.m1_edges.end(), std::back_inserter(out));
  out.insert(out.end(), comp.m2_edges.begin(), comp.m2_edges.end());
  return Schedule(std::move(out));
}

LocalSearchResult local_search(const RendezvousInstance& inst, const Schedule& m1_in,
                               const Schedule& m2_in, double lambda) {
  if (m1_in == m2_in) throw std::invalid_argument("local search needs distinct schedules");
  if (weight(inst, m1_in) > inst.budget + kBudgetSlack)
    throw std::invalid_argument("m1 must be within the budget");
  if (weight(inst, m2_in) <= inst.budget + kBudgetSlack)
    throw std::invalid_argument("m2 must exceed the budget");

  LocalSearchResult res;
  res.m1 = m1_in;
  res.m2 = m2_in;

  while (true) {
    std::vector<MergedComponent> comps = symmetric_difference(inst, res.m1, res.m2);
    if (comps.size() <= 1) break;
    const MergedComponent& y = comps.front();
    Schedule swapped = apply_component(res.m1, y);
    double delta =
        lagrangian_value(inst, swapped, lambda) - lagrangian_value(inst, res.m1, lambda);
    if (weight(inst, swapped) <= inst.budget + kBudgetSlack) {
      res.m1 = std::move(swapped);
      res.absorbed++;
      res.absorbed_deltas.push_back(delta);
      res.drift += delta;
    } else {
      res.m2 = std::move(swapped);
      res.m2_replaced = true;
    }
  }
  return res;
}

}  // namespace rrrp
