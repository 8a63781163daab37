#include "rrrp/mission.hpp"

#include <cmath>
#include <stdexcept>

#include "rrrp/random.hpp"

namespace rrrp {

namespace {

constexpr double kTimeSlack = 1e-9;  // absolute slack on second-valued comparisons

}  // namespace

void MissionGeometry::validate() const {
  if (uavs.empty()) throw std::invalid_argument("mission has no UAVs");
  if (ugvs.empty()) throw std::invalid_argument("mission has no UGVs");
  if (!(uav_speed > 0.0) || !(ugv_speed > 0.0))
    throw std::invalid_argument("speeds must be positive");
  if (!(recharge_s > 0.0)) throw std::invalid_argument("recharge time must be positive");
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be positive");
  for (const UavState& u : uavs) {
    if (u.tour.size() < 2) throw std::invalid_argument("UAV tour too short");
    if (!std::isfinite(u.arc)) throw std::invalid_argument("UAV arc not finite");
    if (!(u.soc >= 0.0 && u.soc <= 1.0))
      throw std::invalid_argument("state of charge outside [0, 1]");
  }
  for (const UgvState& g : ugvs) {
    if (g.tour.size() < 2) throw std::invalid_argument("UGV tour too short");
    if (!std::isfinite(g.arc)) throw std::invalid_argument("UGV arc not finite");
  }
}

std::vector<DepartureVertex> departure_vertices(const MissionGeometry& geom, int uav) {
  const UavState& u = geom.uavs.at(uav);
  const Tour& tour = u.tour;
  std::vector<DepartureVertex> out;

  size_t ahead = tour.next_node_index(u.arc);
  DepartureVertex cur;
  cur.point = tour.point_at(u.arc);
  cur.depart_s = 0.0;
  cur.node = -1;
  cur.return_node = static_cast<int>(ahead);
  cur.return_point = tour.waypoints()[ahead];
  cur.undetoured_s = tour.forward_to_node(u.arc, ahead) / geom.uav_speed;
  out.push_back(cur);

  // Task nodes in visit order, each once per horizon.  A node at forward
  // distance 0 is the current position again, already emitted above.
  for (size_t j = 0; j < tour.size(); ++j) {
    size_t idx = (ahead + j) % tour.size();
    double fwd = tour.forward_to_node(u.arc, idx);
    if (fwd <= kTimeSlack) continue;
    double t = fwd / geom.uav_speed;
    if (t > geom.horizon_s + kTimeSlack) continue;
    size_t nxt = (idx + 1) % tour.size();
    DepartureVertex d;
    d.point = tour.waypoints()[idx];
    d.depart_s = t;
    d.node = static_cast<int>(idx);
    d.return_node = static_cast<int>(nxt);
    d.return_point = tour.waypoints()[nxt];
    d.undetoured_s = dist(d.point, d.return_point) / geom.uav_speed;
    out.push_back(d);
  }
  return out;
}

std::vector<RendezvousVertex> rendezvous_vertices(const MissionGeometry& geom, int ugv) {
  const UgvState& g = geom.ugvs.at(ugv);
  double spacing = geom.ugv_speed * geom.recharge_s;
  std::vector<RendezvousVertex> out;
  for (int m = 0;; ++m) {
    double arrive = m * geom.recharge_s;
    if (arrive + geom.recharge_s > geom.horizon_s + kTimeSlack) break;
    RendezvousVertex v;
    v.arc = g.tour.wrap(g.arc + m * spacing);
    v.point = g.tour.point_at(v.arc);
    v.arrive_s = arrive;
    v.ugv = ugv;
    v.step = m;
    out.push_back(v);
  }
  return out;
}

std::optional<DetourTiming> detour_timing(const DepartureVertex& dep,
                                          const RendezvousVertex& rdv,
                                          const MissionGeometry& geom) {
  DetourTiming t;
  t.fly_out_s = dist(dep.point, rdv.point) / geom.uav_speed;
  double meet = dep.depart_s + t.fly_out_s;
  if (meet > rdv.arrive_s + kTimeSlack) return std::nullopt;  // UGV never waits
  t.wait_s = std::max(0.0, rdv.arrive_s - meet);
  t.recharge_s = geom.recharge_s;
  t.fly_back_s = dist(rdv.point, dep.return_point) / geom.uav_speed;
  if (rdv.arrive_s + t.recharge_s + t.fly_back_s > geom.horizon_s + kTimeSlack)
    return std::nullopt;
  t.undetoured_s = dep.undetoured_s;
  return t;
}

std::optional<double> detour_cost(const DepartureVertex& dep, const RendezvousVertex& rdv,
                                  const MissionGeometry& geom) {
  auto t = detour_timing(dep, rdv, geom);
  if (!t) return std::nullopt;
  return t->overhead();
}

FlightPlan tour_plan(const Tour& tour, double start_arc, double duration_s, double speed) {
  FlightPlan plan;
  if (duration_s <= 0.0 || speed <= 0.0) return plan;
  double remaining = duration_s * speed;
  double s = tour.wrap(start_arc);
  while (remaining > 1e-9) {
    size_t nxt = tour.next_node_index(s);
    double seg = tour.forward_to_node(s, nxt);
    double step = std::min(seg, remaining);
    plan.push_back(PlanStep::fly(step, speed, tour.heading_at(s)));
    s = tour.wrap(s + step);
    remaining -= step;
  }
  return plan;
}

FlightPlan detour_plan(const UavState& uav, const DepartureVertex& dep,
                       const RendezvousVertex& rdv, const DetourTiming& t,
                       const MissionGeometry& geom) {
  FlightPlan plan = tour_plan(uav.tour, uav.arc, dep.depart_s, geom.uav_speed);
  double out = dist(dep.point, rdv.point);
  if (out > 0.0)
    plan.push_back(PlanStep::fly(out, geom.uav_speed, heading_deg(dep.point, rdv.point)));
  if (t.wait_s > kTimeSlack) plan.push_back(PlanStep::wait(t.wait_s));
  return plan;
}

FlightPlan post_recharge_plan(const UavState& uav, const DepartureVertex& dep,
                              const RendezvousVertex& rdv, const DetourTiming& t,
                              const MissionGeometry& geom) {
  FlightPlan plan;
  double back = dist(rdv.point, dep.return_point);
  if (back > 0.0)
    plan.push_back(PlanStep::fly(back, geom.uav_speed, heading_deg(rdv.point, dep.return_point)));
  double remaining = geom.horizon_s - (rdv.arrive_s + t.recharge_s + t.fly_back_s);
  if (remaining > 0.0) {
    FlightPlan rest = tour_plan(uav.tour, uav.tour.node_arc(dep.return_node), remaining,
                                geom.uav_speed);
    plan.insert(plan.end(), rest.begin(), rest.end());
  }
  return plan;
}

const RendezvousVertex& BuiltInstance::slot_of(int ugv_vertex) const {
  if (inst.copy_map.at(ugv_vertex).null_slot)
    throw std::invalid_argument("null vertex has no charger slot");
  return slots.at(ugv_vertex);
}

bool BuiltInstance::is_null_vertex(int ugv_vertex) const {
  return inst.copy_map.at(ugv_vertex).null_slot;
}

int BuiltInstance::null_edge_of(int group) const {
  int e = inst.group_edges.at(group).back();
  if (!inst.copy_map.at(inst.edges[e].g).null_slot)
    throw std::logic_error("group's last edge is not its null edge");
  return e;
}

BuiltInstance build_instance(const MissionGeometry& geom, const EnergyModel& energy,
                             double rho, int copies) {
  geom.validate();
  energy.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0, 1)");
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");

  BuiltInstance built;
  built.copies = copies;
  RendezvousInstance& inst = built.inst;
  int na = static_cast<int>(geom.uavs.size());
  int nk = static_cast<int>(geom.ugvs.size());

  // UGV vertices: `copies` per charger slot, then one null vertex per UAV.
  std::vector<std::vector<RendezvousVertex>> per_ugv(nk);
  int real_vertices = 0;
  for (int k = 0; k < nk; ++k) {
    per_ugv[k] = rendezvous_vertices(geom, k);
    real_vertices += copies * static_cast<int>(per_ugv[k].size());
  }
  inst.num_ugv_vertices = real_vertices + na;
  inst.copy_map.resize(inst.num_ugv_vertices);
  built.slots.resize(real_vertices);
  std::vector<std::vector<int>> slot_base(nk);  // first vertex id of each slot's copies
  int gid = 0;
  for (int k = 0; k < nk; ++k) {
    slot_base[k].resize(per_ugv[k].size());
    for (size_t m = 0; m < per_ugv[k].size(); ++m) {
      slot_base[k][m] = gid;
      for (int c = 0; c < copies; ++c, ++gid) {
        UgvSlot& s = inst.copy_map[gid];
        s.ugv = k;
        s.step = per_ugv[k][m].step;
        s.copy = c;
        s.arrive_s = per_ugv[k][m].arrive_s;
        s.arc = per_ugv[k][m].arc;
        built.slots[gid] = per_ugv[k][m];
      }
    }
  }
  for (int r = 0; r < na; ++r) {
    UgvSlot& s = inst.copy_map[real_vertices + r];
    s.null_slot = true;
    s.null_uav = r;
  }

  // UAV vertices and edges, one group per UAV, null edge last in each group.
  int uid = 0;
  for (int r = 0; r < na; ++r) {
    const UavState& u = geom.uavs[r];
    ChargeState state{u.soc * energy.capacity_j, energy.capacity_j};
    uint64_t seed = mix_seed(energy.seed, static_cast<uint64_t>(r));

    built.departures.push_back(departure_vertices(geom, r));
    const auto& deps = built.departures.back();
    std::vector<int> group;
    for (size_t j = 0; j < deps.size(); ++j) {
      int u_id = uid++;
      group.push_back(u_id);
      for (int k = 0; k < nk; ++k) {
        for (size_t m = 0; m < per_ugv[k].size(); ++m) {
          auto t = detour_timing(deps[j], per_ugv[k][m], geom);
          if (!t) continue;
          double p = edge_probability(energy, state,
                                      detour_plan(u, deps[j], per_ugv[k][m], *t, geom),
                                      post_recharge_plan(u, deps[j], per_ugv[k][m], *t, geom),
                                      seed);
          if (p < kProbFloor) continue;  // certain failure, never optimal
          double cost = t->overhead();
          double w = weight_from_prob(p);
          for (int c = 0; c < copies; ++c)
            inst.edges.push_back(Edge{u_id, slot_base[k][m] + c, cost, w, p});
        }
      }
    }
    // Null option: skip recharging and fly the tour for the whole horizon.
    int null_uav = uid++;
    group.push_back(null_uav);
    double p0 = depletion_probability(energy, state,
                                      tour_plan(u.tour, u.arc, geom.horizon_s, geom.uav_speed),
                                      seed);
    p0 = std::max(p0, kProbFloor);
    inst.edges.push_back(Edge{null_uav, real_vertices + r, 0.0, weight_from_prob(p0), p0});
    inst.uav_groups.push_back(std::move(group));
  }

  inst.budget = -std::log(rho);
  inst.capacity = 1;  // charger concurrency is explicit in the copy vertices
  inst.finalize();
  return built;
}

}  // namespace rrrp
