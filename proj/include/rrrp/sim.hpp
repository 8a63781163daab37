#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rrrp/energy.hpp"
#include "rrrp/mission.hpp"

namespace rrrp {

// Recharging decision rule applied during a trial.  The planner variant
// re-solves the rendezvous assignment every replan interval; the greedy
// variant sends a UAV to the earliest reachable charger slot as soon as its
// charge drops below the threshold.
struct Policy {
  enum class Kind { Recharge, Greedy };
  enum class Solver { Bicriteria, Feasible, Exact };

  Kind kind = Kind::Recharge;
  Solver solver = Solver::Feasible;
  double epsilon = 1.0;  // bicriteria solver only
  double rho = std::nan("");  // risk bound; NaN falls back to SimConfig.rho
  double threshold = 0.5;     // greedy trigger, fraction of capacity

  std::string name() const;
  // "rrrp", "rrrp:bicriteria", "rrrp:exact", "greedy:0.4".
  static Policy parse(const std::string& text);
  static Policy recharge(Solver s = Solver::Feasible, double rho_ = std::nan(""),
                         double eps = 1.0);
  static Policy greedy(double threshold);
};

struct SimConfig {
  double replan_s = 120.0;
  double rho = 0.1;
  double dt_s = 1.0;
  double max_time_s = 40000.0;
  int charger_capacity = 1;   // UAVs chargeable at once per UGV
  uint64_t seed = 1;
  int trials = 20;
  bool continue_after_failure = false;  // ground the UAV and keep simulating

  void validate() const;  // throws std::invalid_argument
};

struct Scenario {
  MissionGeometry geometry;  // initial vehicle states; horizon and recharge live here
  EnergyModel energy;
  SimConfig sim;
};

struct SimMetrics {
  double time_before_first_failure_s = 0.0;  // censored at max_time_s
  double travel_time_overhead = 0.0;  // (active - on-tour-equivalent) / on-tour-equivalent
  long long task_nodes_visited = 0;
  // (total rendezvous across UAVs) * horizon / elapsed.
  double rendezvous_per_horizon = 0.0;
  bool failed = false;
  double elapsed_s = 0.0;
  long long rendezvous = 0;
  long long fallbacks = 0;      // ticks where the planner fell back to max-probability
  long long capacity_over = 0;  // commitments that exceeded charger concurrency
};

struct TrialResult {
  SimMetrics metrics;
  std::string event_log;  // newline-delimited JSON {t, vehicle, event, data}
};

// One seeded trial: 1 s ticks with event-exact boundaries inside each tick.
// UAVs physically on a detour are never re-planned; an infeasible planning
// tick falls back to the maximum-probability schedule and is logged.  The
// trial ends at the first battery depletion (unless configured to continue)
// or at max_time_s.
TrialResult run_trial(const Scenario& sc, const Policy& policy, uint64_t seed);

struct StudyRow {
  std::string policy;
  double rho = 0.0;  // 0 marks policies that take no risk parameter
  uint64_t seed = 0;
  SimMetrics metrics;
};

// Grid of (policy x rho for planner policies without a pinned rho) x trial
// seeds.  Seeds are shared across variants so comparisons are paired; rows
// come back sorted by (policy, rho, seed) regardless of thread count.
std::vector<StudyRow> run_study(const Scenario& sc, const std::vector<Policy>& policies,
                                const std::vector<double>& rhos, int trials);

// Header: policy,rho,seed,ttff_s,overhead,nodes,rdv_per_horizon
std::string study_csv(const std::vector<StudyRow>& rows);

struct StudySummary {
  std::string policy;
  double rho = 0.0;
  int trials = 0;
  double mean_ttff_s = 0.0, ttff_lo_s = 0.0, ttff_hi_s = 0.0;  // 90% bootstrap interval
  double mean_overhead = 0.0, mean_nodes = 0.0, mean_rdv = 0.0;
};

std::vector<StudySummary> summarize_study(const std::vector<StudyRow>& rows,
                                          int resamples = 2000, uint64_t seed = 1);
std::string summary_csv(const std::vector<StudySummary>& rows);

// q-quantile of the bootstrap distribution of the sample mean; q = 0.10 gives
// the lower end of a one-sided 90% interval.
double bootstrap_mean_quantile(const std::vector<double>& xs, double q, int resamples,
                               uint64_t seed);

// Parametric task-loop + road-grid scenario: one polygonal task loop per UAV
// spread across a square field, UGVs on a rectangular street circuit.
struct ScenarioParams {
  int uavs = 4;
  int ugvs = 1;
  int loop_nodes = 6;
  double loop_len_m = 9000.0;
  double field_m = 3000.0;
  uint64_t seed = 17;
};
Scenario default_scenario(const ScenarioParams& p = {});

// JSON round-trip: {uav_tours, ugv_roads, speeds, energy, sim{...}} with
// optional uav_arcs/uav_socs/ugv_arcs.
Scenario scenario_from_json(const std::string& text);
std::string to_json(const Scenario& sc, int indent = 2);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

}  // namespace rrrp
