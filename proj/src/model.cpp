#include "rrrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rrrp {

double weight_from_prob(double prob) {
  return std::log(1.0 / std::max(prob, kProbFloor));
}

void RendezvousInstance::finalize() {
  // Dense disjoint groups over 0..num_uav_vertices-1.
  int max_id = -1;
  size_t total = 0;
  for (const auto& g : uav_groups) {
    total += g.size();
    for (int v : g) {
      if (v < 0) throw std::invalid_argument("negative UAV vertex id");
      max_id = std::max(max_id, v);
    }
  }
  num_uav_vertices = max_id + 1;
  if (total != static_cast<size_t>(num_uav_vertices))
    throw std::invalid_argument("UAV vertex ids must be dense 0..U-1 across groups");
  group_of_uav.assign(num_uav_vertices, -1);
  for (size_t r = 0; r < uav_groups.size(); ++r) {
    for (int v : uav_groups[r]) {
      if (group_of_uav[v] != -1) throw std::invalid_argument("UAV groups are not disjoint");
      group_of_uav[v] = static_cast<int>(r);
    }
  }

  if (num_ugv_vertices < 0) throw std::invalid_argument("negative UGV vertex count");
  if (!copy_map.empty() && copy_map.size() != static_cast<size_t>(num_ugv_vertices))
    throw std::invalid_argument("copy_map size mismatch");
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (!(budget >= 0.0)) throw std::invalid_argument("budget must be >= 0");

  edge_group.assign(edges.size(), -1);
  group_edges.assign(uav_groups.size(), {});
  for (size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    if (ed.u < 0 || ed.u >= num_uav_vertices) throw std::invalid_argument("edge UAV endpoint out of range");
    if (ed.g < 0 || ed.g >= num_ugv_vertices) throw std::invalid_argument("edge UGV endpoint out of range");
    if (!(ed.cost >= 0.0)) throw std::invalid_argument("edge cost must be >= 0");
    if (!(ed.prob > 0.0 && ed.prob <= 1.0)) throw std::invalid_argument("edge prob must be in (0,1]");
    double expect = weight_from_prob(ed.prob);
    if (std::abs(ed.weight - expect) > 1e-12 * std::max(1.0, std::abs(expect)))
      throw std::invalid_argument("edge weight inconsistent with prob");
    edge_group[e] = group_of_uav[ed.u];
    group_edges[edge_group[e]].push_back(static_cast<int>(e));
  }
  for (size_t r = 0; r < uav_groups.size(); ++r) {
    if (group_edges[r].empty()) throw std::invalid_argument("group without edges");
  }
}

Schedule::Schedule(std::vector<int> ids) : edges(std::move(ids)) {
  std::sort(edges.begin(), edges.end());
}

double cost(const RendezvousInstance& inst, const Schedule& s) {
  double c = 0.0;
  for (int e : s.edges) c += inst.edges[e].cost;
  return c;
}

double weight(const RendezvousInstance& inst, const Schedule& s) {
  double a = 0.0;
  for (int e : s.edges) a += inst.edges[e].weight;
  return a;
}

double lagrangian_value(const RendezvousInstance& inst, const Schedule& s, double lambda) {
  double w = 0.0;
  for (int e : s.edges) w += inst.edges[e].cost + lambda * inst.edges[e].weight;
  return w;
}

FeasibilityReport is_feasible(const RendezvousInstance& inst, const Schedule& s) {
  FeasibilityReport rep;
  rep.budget = inst.budget;
  std::vector<int> per_group(inst.num_groups(), 0);
  std::vector<int> per_copy(inst.num_ugv_vertices, 0);
  for (int e : s.edges) {
    per_group[inst.edge_group[e]]++;
    per_copy[inst.edges[e].g]++;
    rep.weight += inst.edges[e].weight;
  }
  rep.one_per_group = true;
  for (int r = 0; r < inst.num_groups(); ++r) {
    if (per_group[r] != 1) {
      rep.one_per_group = false;
      rep.bad_groups.push_back(r);
    }
  }
  rep.copies_ok = true;
  for (int g = 0; g < inst.num_ugv_vertices; ++g) {
    if (per_copy[g] > inst.capacity) {
      rep.copies_ok = false;
      rep.over_copies.push_back(g);
    }
  }
  rep.budget_ok = rep.weight <= inst.budget + kBudgetSlack;
  rep.feasible = rep.one_per_group && rep.copies_ok && rep.budget_ok;
  return rep;
}

LoadAudit audit_copy_load(const RendezvousInstance& inst, const Schedule& s) {
  LoadAudit audit;
  std::vector<int> per_copy(inst.num_ugv_vertices, 0);
  for (int e : s.edges) per_copy[inst.edges[e].g]++;
  for (int g = 0; g < inst.num_ugv_vertices; ++g) {
    audit.max_load = std::max(audit.max_load, per_copy[g]);
    if (per_copy[g] == 2) audit.vertices_at_two++;
    if (per_copy[g] > 2) audit.vertices_above_two++;
  }
  return audit;
}

std::string to_json(const RendezvousInstance& inst, int indent) {
  nlohmann::json j;
  j["uav_groups"] = inst.uav_groups;
  std::vector<int> ugv(inst.num_ugv_vertices);
  for (int i = 0; i < inst.num_ugv_vertices; ++i) ugv[i] = i;
  j["ugv_vertices"] = ugv;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : inst.edges) {
    edges.push_back({{"u", e.u}, {"g", e.g}, {"cost", e.cost}, {"prob", e.prob}});
  }
  j["edges"] = edges;
  j["budget"] = inst.budget;
  j["capacity"] = inst.capacity;
  return j.dump(indent);
}

RendezvousInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RendezvousInstance inst;
  inst.uav_groups = j.at("uav_groups").get<std::vector<std::vector<int>>>();
  auto ugv = j.at("ugv_vertices").get<std::vector<int>>();
  inst.num_ugv_vertices = static_cast<int>(ugv.size());
  for (int i = 0; i < inst.num_ugv_vertices; ++i) {
    if (ugv[i] != i) throw std::invalid_argument("ugv_vertices must be dense 0..G-1");
  }
  for (const auto& je : j.at("edges")) {
    Edge e;
    e.u = je.at("u").get<int>();
    e.g = je.at("g").get<int>();
    e.cost = je.at("cost").get<double>();
    e.prob = je.at("prob").get<double>();
    e.weight = weight_from_prob(e.prob);
    inst.edges.push_back(e);
  }
  inst.budget = j.at("budget").get<double>();
  inst.capacity = j.at("capacity").get<int>();
  inst.finalize();
  return inst;
}

RendezvousInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const RendezvousInstance& inst, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << to_json(inst) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace rrrp
