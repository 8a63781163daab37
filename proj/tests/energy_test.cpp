#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "rrrp/energy.hpp"

using namespace rrrp;

namespace {
EnergyModel deterministic_model() {
  EnergyModel m;
  m.weight_sigma = 0.0;
  m.wind_scale = 0.0;
  m.samples = 16;
  return m;
}
}  // namespace

TEST_CASE("power polynomial at the published operating points") {
  EnergyModel m;
  CHECK(power_draw(m, 0.0, 2.3) == doctest::Approx(158.48).epsilon(1e-9));
  CHECK(power_draw(m, 9.8, 2.3) == doctest::Approx(131.448856).epsilon(1e-9));
}

TEST_CASE("power clamps to the floor when the fit goes negative") {
  EnergyModel m;
  m.power_floor_w = 1.0;
  // weight 0 at low speed puts the raw polynomial below zero
  CHECK(power_draw(m, 0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("airspeed projection") {
  CHECK(airspeed(9.8, 1.5, 0.0) == doctest::Approx(11.3));
  CHECK(airspeed(9.8, 1.5, 90.0) == doctest::Approx(9.8));
  CHECK(airspeed(1.0, 1.5, 180.0) == doctest::Approx(0.5));
  CHECK(airspeed(0.5, 1.5, 180.0) == doctest::Approx(1.0));  // |v - xi|
}

TEST_CASE("plan energy under fixed conditions") {
  EnergyModel m;
  FlightConditions c{2.3, 0.0, 0.0};
  FlightPlan plan = {PlanStep::fly(980.0, 9.8, 0.0)};  // 100 s
  CHECK(plan_energy(m, plan, c) == doctest::Approx(100.0 * 131.448856));

  plan.push_back(PlanStep::wait(10.0));
  CHECK(plan_energy(m, plan, c) == doctest::Approx(100.0 * 131.448856 + 10.0 * 158.48));

  // tailwind on the outbound leg, headwind back
  FlightConditions windy{2.3, 1.5, 0.0};
  FlightPlan there_back = {PlanStep::fly(98.0, 9.8, 0.0), PlanStep::fly(98.0, 9.8, 180.0)};
  double expect = 10.0 * power_draw(m, 11.3, 2.3) + 10.0 * power_draw(m, 8.3, 2.3);
  CHECK(plan_energy(m, there_back, windy) == doctest::Approx(expect));
}

TEST_CASE("depletion probability step cases") {
  EnergyModel m = deterministic_model();
  double leg_j = 1000.0 * 131.448856;
  FlightPlan plan = {PlanStep::fly(9800.0, 9.8, 0.0)};  // 1000 s

  CHECK(depletion_probability(m, {leg_j + 1.0, m.capacity_j}, plan, 1) == doctest::Approx(1.0));
  CHECK(depletion_probability(m, {leg_j - 1.0, m.capacity_j}, plan, 1) == doctest::Approx(0.0));
  CHECK(depletion_probability(m, {0.0, m.capacity_j}, {}, 1) == doctest::Approx(1.0));
}

TEST_CASE("depletion probability straddles the mean at one half") {
  EnergyModel m;
  m.wind_scale = 0.0;  // leave only the symmetric weight noise
  m.samples = 100000;
  FlightPlan plan = {PlanStep::fly(9800.0, 9.8, 0.0)};
  double p = depletion_probability(m, {1000.0 * 131.448856, m.capacity_j}, plan, 42);
  CHECK(std::abs(p - 0.5) <= 0.0048);  // 3 sigma at n = 1e5
}

TEST_CASE("common random numbers make estimates monotone in the plan") {
  EnergyModel m;
  m.samples = 2000;
  FlightPlan shorter = {PlanStep::fly(5000.0, 9.8, 0.0)};
  FlightPlan longer = {PlanStep::fly(5000.0, 9.8, 0.0), PlanStep::fly(3000.0, 9.8, 90.0)};
  ChargeState st{0.35 * m.capacity_j, m.capacity_j};
  for (uint64_t seed = 0; seed < 8; ++seed) {
    CHECK(depletion_probability(m, st, longer, seed) <=
          depletion_probability(m, st, shorter, seed));
  }
}

TEST_CASE("estimates are independent of the thread count") {
  EnergyModel m;
  m.samples = 4096;  // above the serial cutoff
  FlightPlan plan = {PlanStep::fly(12000.0, 9.8, 45.0), PlanStep::wait(30.0)};
  ChargeState st{0.5 * m.capacity_j, m.capacity_j};

  setenv("RRRP_THREADS", "1", 1);
  double p1 = depletion_probability(m, st, plan, 7);
  setenv("RRRP_THREADS", "4", 1);
  double p4 = depletion_probability(m, st, plan, 7);
  unsetenv("RRRP_THREADS");
  CHECK(p1 == p4);
}

TEST_CASE("edge probability is the product of the shared-draw marginals") {
  EnergyModel m;
  m.samples = 3000;
  FlightPlan detour = {PlanStep::fly(2000.0, 9.8, 10.0), PlanStep::wait(40.0)};
  FlightPlan post = {PlanStep::fly(20000.0, 9.8, 200.0)};
  ChargeState st{0.2 * m.capacity_j, m.capacity_j};

  double p = edge_probability(m, st, detour, post, 5);
  double m1 = depletion_probability(m, st, detour, 5);
  ChargeState full{m.capacity_j, m.capacity_j};
  double m2 = depletion_probability(m, full, post, 5);
  CHECK(p == doctest::Approx(m1 * m2).epsilon(1e-12));
}

TEST_CASE("conditions draw is counter seeded") {
  EnergyModel m;
  auto a = draw_conditions(m, 11, 3);
  auto b = draw_conditions(m, 11, 3);
  CHECK(a.weight_kg == b.weight_kg);
  CHECK(a.wind_mps == b.wind_mps);
  CHECK(a.wind_heading_deg == b.wind_heading_deg);
  auto c = draw_conditions(m, 11, 4);
  CHECK(a.weight_kg != c.weight_kg);
  CHECK(a.wind_mps >= 0.0);
  CHECK(a.wind_heading_deg >= 0.0);
  CHECK(a.wind_heading_deg < 360.0);
}

TEST_CASE("energy json round trip and validation") {
  EnergyModel m;
  m.wind_scale = 2.5;
  m.samples = 64;
  m.capacity_j = 50.0 * 3600.0;
  std::string text = to_json(m);
  EnergyModel back = energy_from_json(text);
  CHECK(back.wind_scale == doctest::Approx(2.5));
  CHECK(back.samples == 64);
  CHECK(back.capacity_j == doctest::Approx(50.0 * 3600.0));
  CHECK(back.b0 == doctest::Approx(m.b0));

  EnergyModel defaults = energy_from_json("{}");
  CHECK(defaults.capacity_j == doctest::Approx(97.0 * 3600.0));
  CHECK(defaults.weight_mu == doctest::Approx(2.3));

  CHECK_THROWS(energy_from_json("{\"samples\": 0}"));
  CHECK_THROWS(energy_from_json("{\"wind_b\": -1}"));
}
