#include "rrrp/bicriteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rrrp/flow.hpp"

namespace rrrp {

namespace {

// (cost, id) total order used for the guess threshold.
bool cost_id_less(const RendezvousInstance& inst, int a, int b) {
  if (inst.edges[a].cost != inst.edges[b].cost) return inst.edges[a].cost < inst.edges[b].cost;
  return a < b;
}

struct DupFix {
  bool group_dropped = false;
  bool rerouted = false;
  bool at_two = false;
};

// Repairs the at-most-one doubled group (drop the pricier edge) and the
// at-most-one doubled vertex (reroute one of its edges to a free vertex the
// same UAV vertex can reach at no extra weight).  Loops defensively so any
// input comes out one-per-group and within budget.
DupFix repair_duplicates(const RendezvousInstance& inst, std::vector<int>& edges) {
  DupFix fix;

  std::vector<int> per_group(inst.num_groups(), 0);
  for (int e : edges) per_group[inst.edge_group[e]]++;
  for (int r = 0; r < inst.num_groups(); ++r) {
    while (per_group[r] > 1) {
      // drop the max-cost edge of the group; ties to higher weight, higher id
      int worst = -1;
      for (int e : edges) {
        if (inst.edge_group[e] != r) continue;
        if (worst == -1 || inst.edges[e].cost > inst.edges[worst].cost ||
            (inst.edges[e].cost == inst.edges[worst].cost &&
             (inst.edges[e].weight > inst.edges[worst].weight ||
              (inst.edges[e].weight == inst.edges[worst].weight && e > worst))))
          worst = e;
      }
      edges.erase(std::find(edges.begin(), edges.end(), worst));
      per_group[r]--;
      fix.group_dropped = true;
    }
  }

  std::vector<int> load(inst.num_ugv_vertices, 0);
  for (int e : edges) load[inst.edges[e].g]++;
  for (int j = 0; j < inst.num_ugv_vertices; ++j) {
    if (load[j] <= inst.capacity) continue;
    // candidate reroutes: replace some chosen edge at j by a parallel option
    // of the same UAV vertex into a free vertex, never gaining weight or
    // cost.  Pick the cheapest; ties to lower weight, then lower id.
    int drop = -1, add = -1;
    for (int e : edges) {
      if (inst.edges[e].g != j) continue;
      for (int cand : inst.group_edges[inst.edge_group[e]]) {
        const Edge& ce = inst.edges[cand];
        if (ce.u != inst.edges[e].u || ce.g == j) continue;
        if (load[ce.g] != 0) continue;
        if (ce.weight > inst.edges[e].weight + kBudgetSlack) continue;
        if (ce.cost > inst.edges[e].cost + kBudgetSlack) continue;
        if (add == -1) {
          drop = e;
          add = cand;
          continue;
        }
        double cur = inst.edges[add].cost - inst.edges[drop].cost;
        double alt = ce.cost - inst.edges[e].cost;
        if (alt < cur ||
            (alt == cur && (ce.weight < inst.edges[add].weight ||
                            (ce.weight == inst.edges[add].weight && cand < add))))
          drop = e, add = cand;
      }
    }
    if (add != -1) {
      *std::find(edges.begin(), edges.end(), drop) = add;
      load[j]--;
      load[inst.edges[add].g]++;
      fix.rerouted = true;
    } else {
      fix.at_two = true;
    }
  }
  return fix;
}

}  // namespace

Schedule exchange_step(const RendezvousInstance& inst, const Schedule& m1, const Schedule& m2,
                       double lambda, const ExchangeObserver& observer) {
  if (weight(inst, m1) > inst.budget + kBudgetSlack)
    throw std::invalid_argument("m1 must be within the budget");
  if (weight(inst, m2) <= inst.budget + kBudgetSlack)
    throw std::invalid_argument("m2 must exceed the budget");

  std::vector<MergedComponent> comps = symmetric_difference(inst, m1, m2);
  if (comps.size() != 1)
    throw std::invalid_argument("exchange needs a single-component difference");
  const MergedComponent& y = comps.front();
  const int k = static_cast<int>(y.ordered.size());

  ExchangeDiagnostics diag;
  diag.k = k;
  diag.gap = lagrangian_value(inst, m2, lambda) - lagrangian_value(inst, m1, lambda);

  // signed Lagrangian edge values: removing an m1 edge scores +w, adding an
  // m2 edge scores -w, so the total is -(value gap) <= 0
  auto alpha = [&](int i) {
    const Edge& e = inst.edges[y.ordered[i]];
    double w = e.cost + lambda * e.weight;
    return y.from_m2[i] ? -w : w;
  };

  // rotate to just past the last prefix-sum argmax; every cyclic prefix sum
  // from there is non-positive
  double prefix = 0.0, best = 0.0;
  int last_argmax = 0;
  for (int t = 1; t <= k; ++t) {
    prefix += alpha(t - 1);
    if (prefix >= best) {
      best = prefix;
      last_argmax = t;
    }
  }
  diag.alpha_sum = prefix;
  const int s0 = last_argmax % k;
  diag.start = s0;

  double run = 0.0;
  diag.max_prefix = -std::numeric_limits<double>::infinity();
  for (int h = 1; h <= k; ++h) {
    run += alpha((s0 + h - 1) % k);
    diag.max_prefix = std::max(diag.max_prefix, run);
  }

  // budget scan: walk the rotation and find the first prefix swap that
  // overshoots the budget.  The full swap yields m2, which is over budget, so
  // a crossing always exists; every strictly shorter prefix fits.
  int crossing = -1;
  double a_run = weight(inst, m1);
  for (int h = 1; h <= k; ++h) {
    int e = y.ordered[(s0 + h - 1) % k];
    a_run += y.from_m2[(s0 + h - 1) % k] ? inst.edges[e].weight : -inst.edges[e].weight;
    if (a_run > inst.budget + kBudgetSlack) {
      crossing = h;
      break;
    }
  }
  if (crossing == -1) {
    diag.returned_m1 = true;
    if (observer) observer(diag);
    return m1;
  }

  // keep the prefix before the crossing, trimmed back to end on an m2 edge
  int keep = crossing - 1;
  while (keep > 0 && !y.from_m2[(s0 + keep - 1) % k]) keep--;
  diag.trimmed = keep;

  if (keep == 0) {
    diag.returned_m1 = true;
    if (observer) observer(diag);
    return m1;
  }

  std::vector<bool> swap_in(inst.edges.size(), false);
  for (int h = 0; h < keep; ++h) swap_in[y.ordered[(s0 + h) % k]] = true;

  std::vector<int> out;
  for (int e : m1.edges)
    if (!swap_in[e]) out.push_back(e);
  for (int h = 0; h < keep; ++h) {
    int i = (s0 + h) % k;
    if (y.from_m2[i]) out.push_back(y.ordered[i]);
  }
  std::sort(out.begin(), out.end());

  DupFix fix = repair_duplicates(inst, out);
  diag.group_dup_dropped = fix.group_dropped;
  diag.copy_rerouted = fix.rerouted;
  diag.copy_at_two = fix.at_two;
  if (observer) observer(diag);
  return Schedule(std::move(out));
}

namespace {

struct ResidualInstance {
  RendezvousInstance inst;
  std::vector<int> edge_back;  // residual edge id -> original edge id
  bool viable = false;         // every kept group still has an edge
};

// Removes the guessed groups and vertices plus every edge at or above the
// guess's cheapest (cost, id), shrinks the budget by the guessed weight, and
// reindexes densely.
ResidualInstance make_residual(const RendezvousInstance& inst, const std::vector<int>& guess) {
  ResidualInstance res;

  std::vector<bool> drop_group(inst.num_groups(), false);
  std::vector<bool> drop_vertex(inst.num_ugv_vertices, false);
  double guess_weight = 0.0;
  int threshold = -1;  // guess edge with the minimum (cost, id)
  for (int e : guess) {
    drop_group[inst.edge_group[e]] = true;
    drop_vertex[inst.edges[e].g] = true;
    guess_weight += inst.edges[e].weight;
    if (threshold == -1 || cost_id_less(inst, e, threshold)) threshold = e;
  }

  double budget = inst.budget - guess_weight;
  if (budget < -kBudgetSlack) return res;
  res.inst.budget = std::max(budget, 0.0);
  res.inst.capacity = 1;

  std::vector<int> new_group(inst.num_groups(), -1);
  std::vector<int> new_uav(inst.num_uav_vertices, -1);
  for (int r = 0; r < inst.num_groups(); ++r) {
    if (drop_group[r]) continue;
    new_group[r] = static_cast<int>(res.inst.uav_groups.size());
    std::vector<int> members;
    for (int u : inst.uav_groups[r]) {
      new_uav[u] = res.inst.num_uav_vertices + static_cast<int>(members.size());
      members.push_back(new_uav[u]);
    }
    res.inst.num_uav_vertices += static_cast<int>(members.size());
    res.inst.uav_groups.push_back(std::move(members));
  }

  std::vector<int> new_vertex(inst.num_ugv_vertices, -1);
  for (int g = 0; g < inst.num_ugv_vertices; ++g) {
    if (drop_vertex[g]) continue;
    new_vertex[g] = res.inst.num_ugv_vertices++;
  }

  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
    const Edge& ed = inst.edges[e];
    if (drop_group[inst.edge_group[e]] || drop_vertex[ed.g]) continue;
    if (threshold != -1 && !cost_id_less(inst, e, threshold)) continue;
    Edge copy = ed;
    copy.u = new_uav[ed.u];
    copy.g = new_vertex[ed.g];
    res.inst.edges.push_back(copy);
    res.edge_back.push_back(e);
  }

  if (res.inst.uav_groups.empty()) {
    res.viable = true;  // guess covers every group; the candidate is the guess
    return res;
  }

  std::vector<bool> group_has_edge(res.inst.uav_groups.size(), false);
  std::vector<int> uav_to_group(res.inst.num_uav_vertices, -1);
  for (int r = 0; r < static_cast<int>(res.inst.uav_groups.size()); ++r)
    for (int u : res.inst.uav_groups[r]) uav_to_group[u] = r;
  for (const Edge& ed : res.inst.edges) group_has_edge[uav_to_group[ed.u]] = true;
  for (bool ok : group_has_edge)
    if (!ok) return res;

  res.inst.finalize();
  res.viable = true;
  return res;
}

struct Candidate {
  Schedule schedule;
  double cost = 0.0;
  double lambda = 0.0;
  double gap = 0.0;
  bool optimal_shortcut = false;
};

// Runs the multiplier search plus merge/exchange on a residual and lifts the
// result back to original edge ids.  Returns false when the residual has no
// budget-feasible schedule.
bool solve_residual(const ResidualInstance& res, const std::vector<int>& guess,
                    const ExchangeObserver& observer, Candidate& out) {
  Schedule lifted;
  out = Candidate{};
  if (!res.inst.uav_groups.empty()) {
    BinarySearchResult bs;
    try {
      bs = binary_search(res.inst);
    } catch (const InfeasibleInstance&) {
      return false;
    } catch (const FlowInfeasible&) {
      return false;
    }
    Schedule picked;
    if (bs.is_optimal()) {
      picked = *bs.optimal;
      out.optimal_shortcut = true;
    } else {
      LocalSearchResult ls = local_search(res.inst, *bs.certificate);
      picked = exchange_step(res.inst, ls.m1, ls.m2, bs.certificate->lambda, observer);
      out.lambda = bs.certificate->lambda;
      out.gap = bs.certificate->gap;
    }
    std::vector<int> ids;
    ids.reserve(picked.edges.size());
    for (int e : picked.edges) ids.push_back(res.edge_back[e]);
    lifted = Schedule(std::move(ids));
  }

  std::vector<int> merged = lifted.edges;
  merged.insert(merged.end(), guess.begin(), guess.end());
  out.schedule = Schedule(std::move(merged));
  return true;
}

}  // namespace

BicriteriaResult bicriteria_solve(const RendezvousInstance& inst, const BicriteriaOptions& opts) {
  if (!(opts.epsilon > 0.0) || opts.epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (inst.capacity != 1)
    throw std::invalid_argument("guess-and-solve requires unit vertex capacity");

  {
    Schedule probe = min_weight_schedule(inst);
    double w = weight(inst, probe);
    if (w > inst.budget + kBudgetSlack) throw InfeasibleInstance(w, inst.budget);
  }

  const int p = static_cast<int>(std::ceil(1.0 / opts.epsilon));
  const int gsize = std::min(p, inst.num_groups());

  // candidate pool for guesses, ascending by edge id
  std::vector<int> pool(inst.edges.size());
  for (size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  if (opts.guess_prune) {
    // keep only the p * num_groups highest-cost edges
    size_t cap = static_cast<size_t>(p) * static_cast<size_t>(inst.num_groups());
    if (pool.size() > cap) {
      std::sort(pool.begin(), pool.end(),
                [&](int a, int b) { return cost_id_less(inst, b, a); });
      pool.resize(cap);
      std::sort(pool.begin(), pool.end());
    }
  }

  BicriteriaResult result;
  bool have_best = false;
  long long tried = 0;

  auto consider = [&](const std::vector<int>& guess) {
    tried++;
    ResidualInstance res = make_residual(inst, guess);
    if (!res.viable) return;
    Candidate cand;
    if (!solve_residual(res, guess, opts.observer, cand)) return;
    double w = weight(inst, cand.schedule);
    if (w > inst.budget + kBudgetSlack) return;
    double c = cost(inst, cand.schedule);
    if (have_best && c >= result.cost) return;
    have_best = true;
    result.schedule = cand.schedule;
    result.cost = c;
    result.weight = w;
    result.lambda = cand.lambda;
    result.gap = cand.gap;
    result.guess = guess;
    result.optimal_shortcut = cand.optimal_shortcut;
  };

  consider({});

  // all group- and copy-disjoint guesses of size gsize, lexicographic by ids
  std::vector<int> guess;
  std::vector<bool> used_group(inst.num_groups(), false);
  std::vector<bool> used_vertex(inst.num_ugv_vertices, false);
  double guess_weight = 0.0;

  auto enumerate = [&](auto&& self, size_t from) -> void {
    if (static_cast<int>(guess.size()) == gsize) {
      consider(guess);
      return;
    }
    int slots_left = gsize - static_cast<int>(guess.size());
    for (size_t i = from; i + slots_left <= pool.size(); ++i) {
      int e = pool[i];
      int r = inst.edge_group[e];
      int g = inst.edges[e].g;
      if (used_group[r] || used_vertex[g]) continue;
      if (guess_weight + inst.edges[e].weight > inst.budget + kBudgetSlack) continue;
      used_group[r] = used_vertex[g] = true;
      guess_weight += inst.edges[e].weight;
      guess.push_back(e);
      self(self, i + 1);
      guess.pop_back();
      guess_weight -= inst.edges[e].weight;
      used_group[r] = used_vertex[g] = false;
    }
  };
  if (gsize > 0) enumerate(enumerate, 0);

  result.guesses_tried = tried;
  result.load = audit_copy_load(inst, result.schedule);
  return result;
}

Schedule feasible_fallback(const RendezvousInstance& inst, const LagrangianCertificate& cert) {
  return local_search(inst, cert).m1;
}

BicriteriaResult solve_feasible(const RendezvousInstance& inst, const BicriteriaOptions& opts) {
  BicriteriaResult result = bicriteria_solve(inst, opts);
  if (!opts.fallback_on_violation || result.load.max_load <= inst.capacity) return result;

  BinarySearchResult bs = binary_search(inst);
  Schedule fb;
  if (bs.is_optimal()) {
    fb = *bs.optimal;
    result.lambda = 0.0;
    result.gap = 0.0;
    result.optimal_shortcut = true;
  } else {
    fb = feasible_fallback(inst, *bs.certificate);
    result.lambda = bs.certificate->lambda;
    result.gap = bs.certificate->gap;
    result.optimal_shortcut = false;
  }
  result.schedule = fb;
  result.cost = cost(inst, fb);
  result.weight = weight(inst, fb);
  result.load = audit_copy_load(inst, fb);
  result.guess.clear();
  result.fallback_used = true;
  return result;
}

PipelineResult feasible_pipeline(const RendezvousInstance& inst) {
  PipelineResult out;
  BinarySearchResult bs = binary_search(inst);
  if (bs.is_optimal()) {
    out.schedule = *bs.optimal;
    out.optimal = true;
  } else {
    LocalSearchResult ls = local_search(inst, *bs.certificate);
    out.schedule = ls.m1;
    out.lambda = bs.certificate->lambda;
    out.gap = std::max(0.0, lagrangian_value(inst, ls.m2, out.lambda) -
                                lagrangian_value(inst, ls.m1, out.lambda));
  }
  out.cost = cost(inst, out.schedule);
  out.weight = weight(inst, out.schedule);
  return out;
}

}  // namespace rrrp
