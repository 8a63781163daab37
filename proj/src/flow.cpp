#include "rrrp/flow.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace rrrp {

int FlowNetwork::add_arc(int from, int to, int cap, ArcCost cost, int tag) {
  if (from < 0 || from >= num_nodes || to < 0 || to >= num_nodes)
    throw std::invalid_argument("arc endpoint out of range");
  if (cap < 0) throw std::invalid_argument("arc capacity must be >= 0");
  if (cost.primary < 0.0 || (cost.primary == 0.0 && cost.tie < 0.0))
    throw std::invalid_argument("arc cost must be lexicographically non-negative");
  arcs.push_back({from, to, cap, cost, tag});
  return static_cast<int>(arcs.size()) - 1;
}

FlowNetwork FlowNetwork::from_instance(const RendezvousInstance& inst, double lambda) {
  const int na = inst.num_groups();
  const int nu = inst.num_uav_vertices;
  const int ng = inst.num_ugv_vertices;
  // node ids: source, aggregators, UAV vertices, UGV vertices, sink
  FlowNetwork net(1 + na + nu + ng + 1, 0, 1 + na + nu + ng, na);
  auto agg = [&](int r) { return 1 + r; };
  auto uav = [&](int u) { return 1 + na + u; };
  auto ugv = [&](int g) { return 1 + na + nu + g; };
  for (int r = 0; r < na; ++r) {
    net.add_arc(net.source, agg(r), 1, {0.0, 0.0});
    for (int v : inst.uav_groups[r]) net.add_arc(agg(r), uav(v), 1, {0.0, 0.0});
  }
  for (size_t e = 0; e < inst.edges.size(); ++e) {
    const Edge& ed = inst.edges[e];
    net.add_arc(uav(ed.u), ugv(ed.g), 1, {ed.cost + lambda * ed.weight, ed.weight},
                static_cast<int>(e));
  }
  for (int g = 0; g < ng; ++g) net.add_arc(ugv(g), net.sink, inst.capacity, {0.0, 0.0});
  return net;
}

namespace {

// Residual graph in CSR form; directed arc j pairs with j^1.
struct Residual {
  int n = 0, s = 0, t = 0;
  std::vector<int> offset;    // n+1
  std::vector<int> to;        // per directed arc
  std::vector<int> pair_;     // j -> reverse arc index
  std::vector<ArcCost> cost;  // mutable per lambda
  std::vector<int> cap;       // working residual capacities
  std::vector<int> orig_cap;
  std::vector<int> user_arc;  // forward arcs -> network arc id, else -1

  // scratch
  std::vector<ArcCost> pot, dist;
  std::vector<int> parent;       // incoming directed arc per node
  std::vector<unsigned char> state;  // 0 unreached, 1 open, 2 settled

  explicit Residual(const FlowNetwork& net) {
    n = net.num_nodes;
    s = net.source;
    t = net.sink;
    const int m = static_cast<int>(net.arcs.size());
    std::vector<int> deg(n, 0);
    for (const auto& a : net.arcs) {
      deg[a.from]++;
      deg[a.to]++;
    }
    offset.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) offset[v + 1] = offset[v] + deg[v];
    const int dm = 2 * m;
    to.assign(dm, 0);
    pair_.assign(dm, 0);
    cost.assign(dm, {});
    orig_cap.assign(dm, 0);
    user_arc.assign(dm, -1);
    std::vector<int> fill(offset.begin(), offset.end() - 1);
    for (int i = 0; i < m; ++i) {
      const auto& a = net.arcs[i];
      int f = fill[a.from]++;
      int b = fill[a.to]++;
      to[f] = a.to;
      to[b] = a.from;
      pair_[f] = b;
      pair_[b] = f;
      cost[f] = a.cost;
      cost[b] = {-a.cost.primary, -a.cost.tie};
      orig_cap[f] = a.cap;
      orig_cap[b] = 0;
      user_arc[f] = i;
    }
    pot.resize(n);
    dist.resize(n);
    parent.resize(n);
    state.resize(n);
  }

  void set_edge_cost(int directed_arc, ArcCost c) {
    cost[directed_arc] = c;
    cost[pair_[directed_arc]] = {-c.primary, -c.tie};
  }

  // Sends `required` units s->t along successive shortest paths.  Returns the
  // number of units sent (== required, or throws).
  int solve(int required) {
    cap = orig_cap;
    std::fill(pot.begin(), pot.end(), ArcCost{0.0, 0.0});
    using Item = std::tuple<double, double, int>;  // (primary, tie, node)
    for (int unit = 0; unit < required; ++unit) {
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
      std::fill(state.begin(), state.end(), 0);
      dist[s] = {0.0, 0.0};
      state[s] = 1;
      heap.emplace(0.0, 0.0, s);
      while (!heap.empty()) {
        auto [dw, dt, v] = heap.top();
        heap.pop();
        if (state[v] == 2 || dw != dist[v].primary || dt != dist[v].tie) continue;
        state[v] = 2;
        if (v == t) break;
        for (int j = offset[v]; j < offset[v + 1]; ++j) {
          if (cap[j] <= 0) continue;
          int u = to[j];
          if (state[u] == 2) continue;
          ArcCost rc = cost[j] + pot[v] - pot[u];
          // Reduced costs are non-negative up to rounding; clamp the noise.
          if (rc.primary < 0.0) rc.primary = 0.0;
          if (rc.primary == 0.0 && rc.tie < 0.0) rc.tie = 0.0;
          ArcCost nd = dist[v] + rc;
          if (state[u] == 0 || nd < dist[u]) {
            dist[u] = nd;
            parent[u] = j;
            state[u] = 1;
            heap.emplace(nd.primary, nd.tie, u);
          }
        }
      }
      if (state[t] != 2) throw FlowInfeasible(unit, required);
      ArcCost dt_cap = dist[t];
      for (int v = 0; v < n; ++v) {
        if (state[v] == 0) {
          pot[v] = pot[v] + dt_cap;
        } else {
          pot[v] = pot[v] + (dist[v] < dt_cap ? dist[v] : dt_cap);
        }
      }
      for (int v = t; v != s;) {
        int j = parent[v];
        cap[j]--;
        cap[pair_[j]]++;
        v = to[pair_[j]];
      }
    }
    return required;
  }
};

}  // namespace

MinCostFlowResult min_cost_flow(const FlowNetwork& net) {
  if (net.required_flow < 0) throw std::invalid_argument("required flow must be >= 0");
  Residual res(net);
  res.solve(net.required_flow);
  MinCostFlowResult out;
  out.flow_value = net.required_flow;
  out.arc_flow.assign(net.arcs.size(), 0);
  for (size_t j = 0; j < res.to.size(); ++j) {
    int ua = res.user_arc[j];
    if (ua < 0) continue;
    int f = res.orig_cap[j] - res.cap[j];
    out.arc_flow[ua] = f;
    if (f > 0) {
      out.total.primary += f * net.arcs[ua].cost.primary;
      out.total.tie += f * net.arcs[ua].cost.tie;
    }
  }
  return out;
}

struct LagrangianSolver::Impl {
  Residual res;
  std::vector<int> edge_arc;  // instance edge -> directed arc index

  Impl(const FlowNetwork& net, size_t num_edges) : res(net), edge_arc(num_edges, -1) {
    for (size_t j = 0; j < res.to.size(); ++j) {
      int ua = res.user_arc[j];
      if (ua >= 0 && net.arcs[ua].tag >= 0) edge_arc[net.arcs[ua].tag] = static_cast<int>(j);
    }
  }

  Schedule extract() const {
    std::vector<int> chosen;
    for (size_t e = 0; e < edge_arc.size(); ++e) {
      int j = edge_arc[e];
      if (res.orig_cap[j] - res.cap[j] > 0) chosen.push_back(static_cast<int>(e));
    }
    return Schedule(std::move(chosen));
  }
};

LagrangianSolver::LagrangianSolver(const RendezvousInstance& inst) : inst_(&inst) {
  FlowNetwork net = FlowNetwork::from_instance(inst, 0.0);
  impl_ = std::make_unique<Impl>(net, inst.edges.size());
}

LagrangianSolver::~LagrangianSolver() = default;
LagrangianSolver::LagrangianSolver(LagrangianSolver&&) noexcept = default;
LagrangianSolver& LagrangianSolver::operator=(LagrangianSolver&&) noexcept = default;

Schedule LagrangianSolver::solve(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  for (size_t e = 0; e < inst_->edges.size(); ++e) {
    const Edge& ed = inst_->edges[e];
    impl_->res.set_edge_cost(impl_->edge_arc[e], {ed.cost + lambda * ed.weight, ed.weight});
  }
  impl_->res.solve(inst_->num_groups());
  return impl_->extract();
}

Schedule LagrangianSolver::solve_min_weight() {
  for (size_t e = 0; e < inst_->edges.size(); ++e) {
    const Edge& ed = inst_->edges[e];
    impl_->res.set_edge_cost(impl_->edge_arc[e], {ed.weight, ed.cost});
  }
  impl_->res.solve(inst_->num_groups());
  return impl_->extract();
}

Schedule solve_lagrangian(const RendezvousInstance& inst, double lambda) {
  LagrangianSolver solver(inst);
  return solver.solve(lambda);
}

Schedule min_weight_schedule(const RendezvousInstance& inst) {
  LagrangianSolver solver(inst);
  return solver.solve_min_weight();
}

}  // namespace rrrp
