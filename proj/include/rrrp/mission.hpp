#pragma once

#include <optional>
#include <vector>

#include "rrrp/energy.hpp"
#include "rrrp/geometry.hpp"
#include "rrrp/model.hpp"

namespace rrrp {

// One UAV: its task tour, where it is on that tour, and remaining charge.
struct UavState {
  Tour tour;
  double arc = 0.0;  // arc position, wrapped into [0, tour.length())
  double soc = 1.0;  // fraction of battery capacity
};

// One UGV: its road tour and current arc position.  UGVs drive the tour at
// constant speed and never wait, so arc + elapsed time determine position.
struct UgvState {
  Tour tour;
  double arc = 0.0;
};

struct MissionGeometry {
  std::vector<UavState> uavs;
  std::vector<UgvState> ugvs;
  double uav_speed = 9.8;       // m/s, straight-line flight
  double ugv_speed = 4.5;       // m/s, along the road polyline
  double recharge_s = 100.0;    // time a UAV occupies a charger
  double horizon_s = 2500.0;    // planning horizon

  void validate() const;  // throws std::invalid_argument
};

// A point a UAV may leave its tour from: its current position (node = -1) or
// a task node it reaches within the horizon.  return_point is the task node
// the detour flies back to; undetoured_s is how long the skipped leg from
// point to return_point would have taken.
struct DepartureVertex {
  Vec2 point;
  double depart_s = 0.0;
  int node = -1;
  int return_node = 0;
  Vec2 return_point;
  double undetoured_s = 0.0;
};

// A charger slot in space-time: where UGV `ugv` is after `step` recharge
// periods.  Consecutive steps are spacing = ugv_speed * recharge_s apart
// along the road, the farthest the UGV moves during one recharge.
struct RendezvousVertex {
  Vec2 point;
  double arrive_s = 0.0;
  int ugv = 0;
  int step = 0;
  double arc = 0.0;
};

struct DetourTiming {
  double fly_out_s = 0.0;   // departure point to rendezvous point
  double wait_s = 0.0;      // UAV idles until the UGV arrives
  double recharge_s = 0.0;
  double fly_back_s = 0.0;  // rendezvous point to return task node
  double undetoured_s = 0.0;
  double overhead() const {
    return fly_out_s + wait_s + recharge_s + fly_back_s - undetoured_s;
  }
};

// Departure options for UAV r: current position first, then task nodes in
// visit order.  Nodes the UAV cannot reach within the horizon are omitted; a
// node coinciding with the current position is not emitted twice.
std::vector<DepartureVertex> departure_vertices(const MissionGeometry& geom, int uav);

// Charger slots for UGV k, one per recharge period until a recharge started
// at the slot could no longer finish within the horizon.
std::vector<RendezvousVertex> rendezvous_vertices(const MissionGeometry& geom, int ugv);

// Timeline of the detour dep -> rdv -> dep.return_point, or nullopt when the
// pair is infeasible: the UAV would arrive after the UGV (UGVs never wait) or
// the detour would not complete within the horizon.
std::optional<DetourTiming> detour_timing(const DepartureVertex& dep,
                                          const RendezvousVertex& rdv,
                                          const MissionGeometry& geom);

// Overhead in seconds of the detour relative to flying the tour undetoured;
// nullopt when infeasible.  Waiting and recharging make every real detour
// cost positive; only null edges cost 0.
std::optional<double> detour_cost(const DepartureVertex& dep,
                                  const RendezvousVertex& rdv,
                                  const MissionGeometry& geom);

// Straight tour legs covering duration_s of travel along the tour from
// start_arc, last leg truncated.  Used for energy estimates of on-tour
// flight.
FlightPlan tour_plan(const Tour& tour, double start_arc, double duration_s,
                     double speed);

// Portion of the detour flown on the current charge: on-tour flight to the
// departure point, the leg to the rendezvous point, and the wait.
FlightPlan detour_plan(const UavState& uav, const DepartureVertex& dep,
                       const RendezvousVertex& rdv, const DetourTiming& t,
                       const MissionGeometry& geom);

// Remainder of the horizon after recharging: the leg back to the return node
// and the tour onward, truncated at the horizon.
FlightPlan post_recharge_plan(const UavState& uav, const DepartureVertex& dep,
                              const RendezvousVertex& rdv, const DetourTiming& t,
                              const MissionGeometry& geom);

// Instance plus the geometry bookkeeping needed to execute a chosen edge.
// Group r lists its departure vertices in departures[r] order followed by
// one null vertex; inst.copy_map locates every charger slot.  Chargers that
// can serve several UAVs at once appear as `copies` duplicate vertices per
// slot, so inst.capacity is always 1.
struct BuiltInstance {
  RendezvousInstance inst;
  std::vector<std::vector<DepartureVertex>> departures;
  std::vector<RendezvousVertex> slots;  // indexed by copy_map[g].step order, see slot_of
  int copies = 1;

  // Slot metadata for a UGV vertex; null slots have no entry.
  const RendezvousVertex& slot_of(int ugv_vertex) const;
  bool is_null_vertex(int ugv_vertex) const;
  int null_edge_of(int group) const;  // edge id of (group's null vertex) edge
};

// Builds the rendezvous instance for the coming horizon.  Budget is
// ln(1/rho); each real edge's probability is the Monte Carlo chance of
// completing the detour on the current charge times the chance of finishing
// the horizon on a full one, sharing draws per UAV; the null edge's is the
// chance of lasting the whole horizon unrecharged.  Edges with probability
// below the floor are dropped (their weight would be unbounded); null edges
// are clamped to the floor instead, they must exist.
BuiltInstance build_instance(const MissionGeometry& geom, const EnergyModel& energy,
                             double rho, int copies);

}  // namespace rrrp
