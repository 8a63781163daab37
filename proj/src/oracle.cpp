#include "rrrp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rrrp {

ExactResult exact_solve(const RendezvousInstance& inst, long long node_cap) {
  const int n = inst.num_groups();

  std::vector<double> min_a(n, std::numeric_limits<double>::infinity());
  std::vector<double> min_c(n, std::numeric_limits<double>::infinity());
  for (int r = 0; r < n; ++r) {
    for (int e : inst.group_edges[r]) {
      min_a[r] = std::min(min_a[r], inst.edges[e].weight);
      min_c[r] = std::min(min_c[r], inst.edges[e].cost);
    }
  }

  // branch order: hardest weight demands first, cheapest edges first
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (min_a[x] != min_a[y]) return min_a[x] > min_a[y];
    return x < y;
  });
  std::vector<std::vector<int>> branch_edges(n);
  for (int r = 0; r < n; ++r) {
    branch_edges[r] = inst.group_edges[r];
    std::sort(branch_edges[r].begin(), branch_edges[r].end(), [&](int x, int y) {
      if (inst.edges[x].cost != inst.edges[y].cost) return inst.edges[x].cost < inst.edges[y].cost;
      return x < y;
    });
  }

  // suffix lower bounds over the branch order
  std::vector<double> suf_a(n + 1, 0.0), suf_c(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    suf_a[i] = suf_a[i + 1] + min_a[order[i]];
    suf_c[i] = suf_c[i + 1] + min_c[order[i]];
  }

  ExactResult res;
  std::vector<int> load(inst.num_ugv_vertices, 0);
  std::vector<int> chosen, best;
  double best_c = std::numeric_limits<double>::infinity();
  long long nodes = 0;

  auto rec = [&](auto&& self, int depth, double rw, double rc) -> void {
    if (depth == n) {
      if (rc < best_c) {
        best_c = rc;
        best = chosen;
      }
      return;
    }
    int r = order[depth];
    for (int e : branch_edges[r]) {
      if (++nodes > node_cap) throw OracleTooLarge(nodes, node_cap);
      const Edge& ed = inst.edges[e];
      if (load[ed.g] >= inst.capacity) continue;
      double nrw = rw + ed.weight;
      if (nrw + suf_a[depth + 1] > inst.budget + kBudgetSlack) continue;
      double nrc = rc + ed.cost;
      if (nrc + suf_c[depth + 1] >= best_c) continue;
      load[ed.g]++;
      chosen.push_back(e);
      self(self, depth + 1, nrw, nrc);
      chosen.pop_back();
      load[ed.g]--;
    }
  };
  rec(rec, 0, 0.0, 0.0);

  res.nodes = nodes;
  if (std::isfinite(best_c)) {
    res.schedule = Schedule(best);
    res.cost = best_c;
  }
  return res;
}

double PartitionInstance::total() const {
  double t = 0.0;
  for (long long v : z) t += static_cast<double>(v);
  return t;
}

void PartitionInstance::validate() const {
  if (z.empty() || z.size() % 2 != 0)
    throw std::invalid_argument("partition list needs a positive, even number of entries");
  for (long long v : z)
    if (v <= 0) throw std::invalid_argument("partition entries must be positive");
}

RendezvousInstance reduce_evenodd(const PartitionInstance& p) {
  p.validate();
  for (long long v : p.z)
    if (v > 27)
      throw std::invalid_argument(
          "partition entry too large: exp(-weight) would fall below the probability floor");

  RendezvousInstance inst;
  const int l = p.pairs();
  inst.num_ugv_vertices = 2 * l;
  inst.budget = p.target();
  for (int j = 0; j < l; ++j) {
    inst.uav_groups.push_back({j});
    for (int k = 2 * j; k <= 2 * j + 1; ++k) {
      Edge e;
      e.u = j;
      e.g = k;
      e.cost = static_cast<double>(p.z[k]);
      e.weight = static_cast<double>(p.z[k ^ 1]);
      e.prob = std::exp(-e.weight);
      inst.edges.push_back(e);
    }
  }
  inst.finalize();
  return inst;
}

}  // namespace rrrp
