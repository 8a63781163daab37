#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrrp {

// Stochastic power model: draw depends on airspeed and payload weight, with
// weight Gaussian and wind speed Weibull, wind heading uniform.  One draw of
// (weight, wind) holds for a whole flight.
struct EnergyModel {
  // P(v, w) = b0 + b1 v + b2 v^2 + b3 v^3 + b4 w + b5 v w   [watts]
  double b0 = -88.77;
  double b1 = 3.53;
  double b2 = -0.42;
  double b3 = 0.043;
  double b4 = 107.5;
  double b5 = -2.74;

  double weight_mu = 2.3;      // kg
  double weight_sigma = 0.05;  // kg
  double wind_scale = 1.5;     // Weibull characteristic velocity, m/s
  double wind_shape = 3.0;     // Weibull shape
  double capacity_j = 97.0 * 3600.0;  // battery capacity, joules

  int samples = 512;       // Monte Carlo samples per estimate
  uint64_t seed = 0;       // master seed for estimates
  double power_floor_w = 0.0;  // clamp for unphysical negative draws

  void validate() const;  // throws std::invalid_argument
};

struct ChargeState {
  double energy_j = 0.0;
  double capacity_j = 0.0;
  double soc() const { return capacity_j > 0.0 ? energy_j / capacity_j : 0.0; }
};

// Polynomial draw at airspeed v_air and weight w, clamped to the model floor
// when the fit goes negative outside its calibrated range.
double power_draw(const EnergyModel& m, double v_air, double w_kg);

// Airspeed for ground speed v, wind speed xi and relative wind heading psi in
// degrees: |v + cos(psi) * xi|.
double airspeed(double v_ground, double xi, double psi_deg);

// One flight plan step: either a flight leg at constant ground speed with a
// fixed ground-track heading, or a hover/wait.
struct PlanStep {
  enum class Kind { Fly, Wait } kind = Kind::Fly;
  double distance_m = 0.0;
  double speed_mps = 0.0;
  double heading_deg = 0.0;  // ground track, for wind projection
  double wait_s = 0.0;

  static PlanStep fly(double distance_m, double speed_mps, double heading_deg) {
    PlanStep s;
    s.kind = Kind::Fly;
    s.distance_m = distance_m;
    s.speed_mps = speed_mps;
    s.heading_deg = heading_deg;
    return s;
  }
  static PlanStep wait(double seconds) {
    PlanStep s;
    s.kind = Kind::Wait;
    s.wait_s = seconds;
    return s;
  }

  double duration_s() const {
    return kind == Kind::Wait ? wait_s : (speed_mps > 0.0 ? distance_m / speed_mps : 0.0);
  }
};

using FlightPlan = std::vector<PlanStep>;

// Flight conditions drawn once per sample (= per flight).
struct FlightConditions {
  double weight_kg = 0.0;
  double wind_mps = 0.0;
  double wind_heading_deg = 0.0;
};

FlightConditions draw_conditions(const EnergyModel& m, uint64_t seed, uint64_t sample);

// Energy in joules the plan consumes under fixed conditions.  Hover draws
// power_draw(0, w) regardless of wind.
double plan_energy(const EnergyModel& m, const FlightPlan& plan, const FlightConditions& c);

// Monte Carlo probability that the remaining energy covers the plan, i.e.
// cumulative consumption stays within state.energy_j at every step boundary.
// Per-sample counter seeding makes the estimate independent of thread count,
// and common random numbers make it monotone in the plan.
double depletion_probability(const EnergyModel& m, const ChargeState& state,
                             const FlightPlan& plan, uint64_t seed);

// Success probability of a recharge detour: probability of completing
// detour_plan on the current charge times the probability of completing
// post_plan on a full battery.  Both marginals share the same sample draws.
double edge_probability(const EnergyModel& m, const ChargeState& state,
                        const FlightPlan& detour_plan, const FlightPlan& post_plan,
                        uint64_t seed);

// JSON config block {b0..b5, weight_mu, weight_sigma, wind_a, wind_b,
// capacity_wh, samples, seed}; absent keys keep defaults.
EnergyModel energy_from_json(const std::string& text);
std::string to_json(const EnergyModel& m, int indent = 2);

}  // namespace rrrp
