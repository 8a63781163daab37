#include "rrrp/energy.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "json.hpp"
#include "rrrp/parallel.hpp"
#include "rrrp/random.hpp"

namespace rrrp {

void EnergyModel::validate() const {
  if (!(weight_sigma >= 0.0)) throw std::invalid_argument("weight_sigma must be >= 0");
  if (!(weight_mu > 0.0)) throw std::invalid_argument("weight_mu must be > 0");
  if (!(wind_scale >= 0.0)) throw std::invalid_argument("wind_scale must be >= 0");
  if (!(wind_shape > 0.0)) throw std::invalid_argument("wind_shape must be > 0");
  if (!(capacity_j > 0.0)) throw std::invalid_argument("capacity must be > 0");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
}

namespace {
std::atomic<bool> g_warned_negative_power{false};
}

double power_draw(const EnergyModel& m, double v_air, double w_kg) {
  double p = m.b0 + m.b1 * v_air + m.b2 * v_air * v_air + m.b3 * v_air * v_air * v_air +
             m.b4 * w_kg + m.b5 * v_air * w_kg;
  if (p <= 0.0) {
    if (!g_warned_negative_power.exchange(true)) {
      std::cerr << "warning: power model went non-positive (v=" << v_air << ", w=" << w_kg
                << "); clamping to " << m.power_floor_w << " W\n";
    }
    return m.power_floor_w;
  }
  return p;
}

double airspeed(double v_ground, double xi, double psi_deg) {
  return std::abs(v_ground + std::cos(psi_deg * M_PI / 180.0) * xi);
}

FlightConditions draw_conditions(const EnergyModel& m, uint64_t seed, uint64_t sample) {
  SampleRng rng(seed, sample);
  FlightConditions c;
  c.weight_kg = std::max(0.01, rng.normal(m.weight_mu, m.weight_sigma));
  c.wind_mps = rng.weibull(m.wind_scale, m.wind_shape);
  c.wind_heading_deg = 360.0 * rng.u01();
  return c;
}

double plan_energy(const EnergyModel& m, const FlightPlan& plan, const FlightConditions& c) {
  double e = 0.0;
  for (const PlanStep& s : plan) {
    if (s.kind == PlanStep::Kind::Wait) {
      e += power_draw(m, 0.0, c.weight_kg) * s.wait_s;
    } else if (s.speed_mps > 0.0 && s.distance_m > 0.0) {
      double v = airspeed(s.speed_mps, c.wind_mps, c.wind_heading_deg - s.heading_deg);
      e += power_draw(m, v, c.weight_kg) * (s.distance_m / s.speed_mps);
    }
  }
  return e;
}

namespace {

// Power is non-negative, so cumulative consumption is monotone and the
// every-boundary requirement reduces to the final total; still checked per
// boundary to keep the contract literal.
bool plan_survives(const EnergyModel& m, const FlightPlan& plan, const FlightConditions& c,
                   double budget_j) {
  double e = 0.0;
  for (const PlanStep& s : plan) {
    if (s.kind == PlanStep::Kind::Wait) {
      e += power_draw(m, 0.0, c.weight_kg) * s.wait_s;
    } else if (s.speed_mps > 0.0 && s.distance_m > 0.0) {
      double v = airspeed(s.speed_mps, c.wind_mps, c.wind_heading_deg - s.heading_deg);
      e += power_draw(m, v, c.weight_kg) * (s.distance_m / s.speed_mps);
    }
    if (e > budget_j) return false;
  }
  return true;
}

}  // namespace

double depletion_probability(const EnergyModel& m, const ChargeState& state,
                             const FlightPlan& plan, uint64_t seed) {
  if (plan.empty()) return 1.0;
  const int n = m.samples;
  std::atomic<int64_t> ok{0};
  parallel_chunks(n, [&](int64_t b, int64_t e) {
    int64_t local = 0;
    for (int64_t i = b; i < e; ++i) {
      FlightConditions c = draw_conditions(m, seed, static_cast<uint64_t>(i));
      if (plan_survives(m, plan, c, state.energy_j)) local++;
    }
    ok.fetch_add(local, std::memory_order_relaxed);
  });
  return static_cast<double>(ok.load()) / static_cast<double>(n);
}

double edge_probability(const EnergyModel& m, const ChargeState& state,
                        const FlightPlan& detour_plan, const FlightPlan& post_plan,
                        uint64_t seed) {
  const int n = m.samples;
  std::atomic<int64_t> ok_detour{0};
  std::atomic<int64_t> ok_post{0};
  parallel_chunks(n, [&](int64_t b, int64_t e) {
    int64_t ld = 0, lp = 0;
    for (int64_t i = b; i < e; ++i) {
      FlightConditions c = draw_conditions(m, seed, static_cast<uint64_t>(i));
      if (detour_plan.empty() || plan_survives(m, detour_plan, c, state.energy_j)) ld++;
      if (post_plan.empty() || plan_survives(m, post_plan, c, m.capacity_j)) lp++;
    }
    ok_detour.fetch_add(ld, std::memory_order_relaxed);
    ok_post.fetch_add(lp, std::memory_order_relaxed);
  });
  double pd = static_cast<double>(ok_detour.load()) / static_cast<double>(n);
  double pp = static_cast<double>(ok_post.load()) / static_cast<double>(n);
  return pd * pp;
}

EnergyModel energy_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EnergyModel m;
  auto get = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  get("b0", m.b0);
  get("b1", m.b1);
  get("b2", m.b2);
  get("b3", m.b3);
  get("b4", m.b4);
  get("b5", m.b5);
  get("weight_mu", m.weight_mu);
  get("weight_sigma", m.weight_sigma);
  get("wind_a", m.wind_scale);
  get("wind_b", m.wind_shape);
  if (j.contains("capacity_wh")) m.capacity_j = j.at("capacity_wh").get<double>() * 3600.0;
  if (j.contains("samples")) m.samples = j.at("samples").get<int>();
  if (j.contains("seed")) m.seed = j.at("seed").get<uint64_t>();
  if (j.contains("power_floor_w")) m.power_floor_w = j.at("power_floor_w").get<double>();
  m.validate();
  return m;
}

std::string to_json(const EnergyModel& m, int indent) {
  nlohmann::json j;
  j["b0"] = m.b0;
  j["b1"] = m.b1;
  j["b2"] = m.b2;
  j["b3"] = m.b3;
  j["b4"] = m.b4;
  j["b5"] = m.b5;
  j["weight_mu"] = m.weight_mu;
  j["weight_sigma"] = m.weight_sigma;
  j["wind_a"] = m.wind_scale;
  j["wind_b"] = m.wind_shape;
  j["capacity_wh"] = m.capacity_j / 3600.0;
  j["samples"] = m.samples;
  j["seed"] = m.seed;
  j["power_floor_w"] = m.power_floor_w;
  return j.dump(indent);
}

}  // namespace rrrp
