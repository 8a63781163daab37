// Command-line frontend: instance generation, solving, simulation studies,
// and the benchmark harness, as one binary with subcommands.
//
// Exit codes: 0 success, 2 infeasible instance, 1 any other failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrrp/bicriteria.hpp"
#include "rrrp/generator.hpp"
#include "rrrp/lagrangian.hpp"
#include "rrrp/model.hpp"
#include "rrrp/oracle.hpp"
#include "rrrp/random.hpp"
#include "rrrp/sim.hpp"

using nlohmann::json;
using namespace rrrp;

namespace {

constexpr const char* kVersion = "rrrp 0.1.0";
constexpr int kExitInfeasible = 2;

double wall_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Reproducibility record: the hash covers the resolved configuration, the
// seed, and the input files' bytes, so equal hashes mean equal outputs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  json overrides = json::object();
  uint64_t seed = 0;
  std::string outdir;
  std::string version = kVersion;
  std::string config_hash;

  void finish() {
    json j = to_json();
    j.erase("config_hash");
    config_hash = hex64(fnv1a(j.dump()));
  }

  json to_json() const {
    return {{"subcommand", subcommand}, {"inputs", inputs},   {"overrides", overrides},
            {"seed", seed},             {"outdir", outdir},   {"version", version},
            {"config_hash", config_hash}};
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  std::filesystem::create_directories(dir);
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_manifest(const RunManifest& m) {
  atomic_write(join_path(m.outdir, "manifest.json"), m.to_json().dump(2) + "\n");
}

// CSV artifacts carry the manifest hash as a leading comment line; JSON
// artifacts embed it as a "manifest" key.
std::string stamp_csv(const std::string& csv, const RunManifest& m) {
  return "# manifest " + m.config_hash + "\n" + csv;
}

json stamp_json(json j, const RunManifest& m) {
  j["manifest"] = m.config_hash;
  return j;
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == ':' || c == '.' || c == '/') c = '_';
  return out;
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    long long v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad integer in list: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string kind;  // evenodd | instance | scenario
  std::string list;
  InstanceParams inst;
  ScenarioParams scen;
  uint64_t seed = 17;
  std::string outdir;
};

int cmd_gen(const GenArgs& a) {
  RunManifest man;
  man.subcommand = "gen " + a.kind;
  man.seed = a.seed;
  man.outdir = a.outdir;

  std::string artifact_name;
  json body;
  std::string summary;
  if (a.kind == "evenodd") {
    PartitionInstance part;
    part.z = parse_ll_list(a.list);
    RendezvousInstance inst = reduce_evenodd(part);
    man.overrides["list"] = part.z;
    body = json::parse(to_json(inst));
    artifact_name = "instance.json";
    std::ostringstream os;
    os << "gen evenodd: pairs=" << part.pairs() << " target=" << part.target()
       << " edges=" << inst.edges.size();
    summary = os.str();
  } else if (a.kind == "instance") {
    RendezvousInstance inst = random_rendezvous(a.seed, a.inst);
    man.overrides = {{"groups", a.inst.groups},
                     {"ugv_vertices", a.inst.ugv_vertices},
                     {"edges_per_group", a.inst.edges_per_group},
                     {"budget_scale", a.inst.budget_scale},
                     {"capacity", a.inst.capacity}};
    body = json::parse(to_json(inst));
    artifact_name = "instance.json";
    std::ostringstream os;
    os << "gen instance: groups=" << inst.num_groups() << " edges=" << inst.edges.size()
       << " budget=" << inst.budget;
    summary = os.str();
  } else {
    ScenarioParams p = a.scen;
    p.seed = a.seed;
    Scenario sc = default_scenario(p);
    man.overrides = {{"uavs", p.uavs},
                     {"ugvs", p.ugvs},
                     {"loop_nodes", p.loop_nodes},
                     {"loop_len_m", p.loop_len_m},
                     {"field_m", p.field_m}};
    body = json::parse(to_json(sc));
    artifact_name = "scenario.json";
    std::ostringstream os;
    os << "gen scenario: uavs=" << p.uavs << " ugvs=" << p.ugvs << " field_m=" << p.field_m;
    summary = os.str();
  }
  man.finish();

  if (a.outdir.empty()) {
    std::cout << body.dump(2) << "\n";
    return 0;
  }
  atomic_write(join_path(a.outdir, artifact_name),
               stamp_json(body, man).dump(2) + "\n");
  write_manifest(man);
  std::cout << summary << " -> " << join_path(a.outdir, artifact_name) << "\n";
  return 0;
}

// -------------------------------------------------------------- solve ----

struct SolveArgs {
  std::string input;
  std::string algo = "feasible";
  double epsilon = 1.0;
  double rho_override = std::nan("");
  uint64_t seed = 0;
  std::string outdir = ".";
};

int cmd_solve(const SolveArgs& a) {
  RunManifest man;
  man.subcommand = "solve";
  man.inputs = {a.input};
  man.seed = a.seed;
  man.outdir = a.outdir;
  std::string raw = read_file(a.input);
  man.overrides = {{"algo", a.algo},
                   {"epsilon", a.epsilon},
                   {"input_hash", hex64(fnv1a(raw))}};
  if (!std::isnan(a.rho_override)) man.overrides["rho_override"] = a.rho_override;
  man.finish();

  RendezvousInstance inst = instance_from_json(raw);
  if (!std::isnan(a.rho_override)) {
    if (!(a.rho_override > 0.0 && a.rho_override < 1.0))
      throw std::invalid_argument("rho override must be in (0, 1)");
    inst.budget = std::log(1.0 / a.rho_override);
  }

  json out;
  out["budget"] = inst.budget;
  out["algo"] = a.algo;
  auto t0 = std::chrono::steady_clock::now();
  Schedule schedule;
  double gap = 0.0;
  bool optimal = false;
  bool feasible_instance = true;
  try {
    if (a.algo == "bicriteria") {
      BicriteriaOptions opts;
      opts.epsilon = a.epsilon;
      opts.fallback_on_violation = false;
      BicriteriaResult r = bicriteria_solve(inst, opts);
      schedule = r.schedule;
      gap = r.gap;
      optimal = r.optimal_shortcut;
    } else if (a.algo == "feasible") {
      PipelineResult r = feasible_pipeline(inst);
      schedule = r.schedule;
      gap = r.gap;
      optimal = r.optimal;
    } else if (a.algo == "exact") {
      ExactResult r = exact_solve(inst);
      if (!r.feasible()) feasible_instance = false;
      else {
        schedule = *r.schedule;
        optimal = true;
      }
    } else {
      throw std::invalid_argument("unknown algo: " + a.algo);
    }
  } catch (const InfeasibleInstance&) {
    feasible_instance = false;
  }
  double ms = wall_ms(t0);

  if (!feasible_instance) {
    out["feasible"] = false;
    out["wall_time_ms"] = ms;
    atomic_write(join_path(a.outdir, "solution.json"),
                 stamp_json(out, man).dump(2) + "\n");
    write_manifest(man);
    std::cerr << "solve: infeasible, no schedule meets the budget " << inst.budget << "\n";
    return kExitInfeasible;
  }

  LoadAudit load = audit_copy_load(inst, schedule);
  int violations = load.vertices_at_two + load.vertices_above_two;
  double c = cost(inst, schedule);
  double w = weight(inst, schedule);
  out["feasible"] = true;
  out["schedule"] = schedule.edges;
  out["cost"] = c;
  out["weight"] = w;
  out["violation_count"] = violations;
  out["gap"] = gap;
  out["optimal"] = optimal;
  out["wall_time_ms"] = ms;
  atomic_write(join_path(a.outdir, "solution.json"), stamp_json(out, man).dump(2) + "\n");
  write_manifest(man);
  std::cout << "solve: algo=" << a.algo << " cost=" << c << " weight=" << w
            << " budget=" << inst.budget << " violations=" << violations << " gap=" << gap
            << " time_ms=" << ms << "\n";
  return 0;
}

// ----------------------------------------------------------- simulate ----

struct SimulateArgs {
  std::string input;
  std::vector<std::string> policies;
  std::vector<double> rhos;
  int trials = 0;  // 0: scenario default
  uint64_t seed = 0;
  bool seed_set = false;
  std::string outdir = ".";
  std::string format = "csv";
  bool with_summary = false;
  bool with_logs = false;
};

json metrics_json(const StudyRow& r) {
  return {{"policy", r.policy},
          {"rho", r.rho},
          {"seed", r.seed},
          {"ttff_s", r.metrics.time_before_first_failure_s},
          {"overhead", r.metrics.travel_time_overhead},
          {"nodes", r.metrics.task_nodes_visited},
          {"rdv_per_horizon", r.metrics.rendezvous_per_horizon}};
}

int cmd_simulate(const SimulateArgs& a) {
  RunManifest man;
  man.subcommand = "simulate";
  man.inputs = {a.input};
  man.outdir = a.outdir;
  std::string raw = read_file(a.input);
  Scenario sc = scenario_from_json(raw);
  if (a.seed_set) sc.sim.seed = a.seed;
  int trials = a.trials > 0 ? a.trials : sc.sim.trials;

  std::vector<Policy> policies;
  std::vector<std::string> names = a.policies.empty() ? std::vector<std::string>{"rrrp"}
                                                      : a.policies;
  for (const std::string& s : names) policies.push_back(Policy::parse(s));
  std::vector<double> rhos = a.rhos.empty() ? std::vector<double>{sc.sim.rho} : a.rhos;

  man.seed = sc.sim.seed;
  man.overrides = {{"policies", names}, {"rhos", rhos}, {"trials", trials},
                   {"format", a.format}, {"input_hash", hex64(fnv1a(raw))}};
  man.finish();

  auto rows = run_study(sc, policies, rhos, trials);

  std::string metrics_path;
  if (a.format == "json") {
    json arr = json::array();
    for (const StudyRow& r : rows) arr.push_back(metrics_json(r));
    metrics_path = join_path(a.outdir, "metrics.json");
    atomic_write(metrics_path, stamp_json(json{{"rows", arr}}, man).dump(2) + "\n");
  } else {
    metrics_path = join_path(a.outdir, "metrics.csv");
    atomic_write(metrics_path, stamp_csv(study_csv(rows), man));
  }

  if (a.with_summary) {
    auto sums = summarize_study(rows);
    if (a.format == "json") {
      json arr = json::array();
      for (const StudySummary& s : sums)
        arr.push_back({{"policy", s.policy},
                       {"rho", s.rho},
                       {"trials", s.trials},
                       {"mean_ttff_s", s.mean_ttff_s},
                       {"ttff_lo_s", s.ttff_lo_s},
                       {"ttff_hi_s", s.ttff_hi_s},
                       {"mean_overhead", s.mean_overhead},
                       {"mean_nodes", s.mean_nodes},
                       {"mean_rdv", s.mean_rdv}});
      atomic_write(join_path(a.outdir, "summary.json"),
                   stamp_json(json{{"rows", arr}}, man).dump(2) + "\n");
    } else {
      atomic_write(join_path(a.outdir, "summary.csv"), stamp_csv(summary_csv(sums), man));
    }
  }

  if (a.with_logs) {
    // Trials are deterministic per seed, so logs can be regenerated per row.
    for (const StudyRow& r : rows) {
      Policy p = Policy::parse(r.policy);
      if (p.kind == Policy::Kind::Recharge) p.rho = r.rho;
      TrialResult t = run_trial(sc, p, r.seed);
      char rho_txt[32];
      std::snprintf(rho_txt, sizeof rho_txt, "%g", r.rho);
      std::string name = "events_" + sanitize(r.policy) + "_" + sanitize(rho_txt) + "_" +
                         std::to_string(r.seed) + ".ndjson";
      atomic_write(join_path(a.outdir, name), t.event_log);
    }
  }

  write_manifest(man);
  std::cout << study_csv(rows);
  std::cerr << "simulate: " << rows.size() << " rows -> " << metrics_path << "\n";
  return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string sizes = "60,150,600,2000,6000,20000,60500";
  int trials = 20;
  uint64_t seed = 1;
  std::string outdir = ".";
  std::string format = "csv";
  long long oracle_cap = kDefaultOracleNodeCap;
};

int cmd_bench(const BenchArgs& a) {
  RunManifest man;
  man.subcommand = "bench";
  man.seed = a.seed;
  man.outdir = a.outdir;
  man.overrides = {{"sizes", a.sizes}, {"trials", a.trials}, {"format", a.format}};
  man.finish();

  std::vector<long long> sizes = parse_ll_list(a.sizes);
  std::ostringstream csv;
  csv << "size,trial,edges,groups,pipeline_ms,pipeline_cost,oracle_ms,oracle_cost,gap_pct\n";
  json jrows = json::array();

  for (size_t si = 0; si < sizes.size(); ++si) {
    double sum_ms = 0.0, sum_gap = 0.0, max_ms = 0.0;
    int solved = 0, with_gap = 0;
    for (int trial = 0; trial < a.trials; ++trial) {
      uint64_t seed = mix_seed(a.seed, si * 10007ull + static_cast<uint64_t>(trial));
      InstanceParams params = sized_params(sizes[si]);
      RendezvousInstance inst = random_rendezvous(seed, params);

      auto t0 = std::chrono::steady_clock::now();
      PipelineResult pipe = feasible_pipeline(inst);
      double pipe_ms = wall_ms(t0);
      sum_ms += pipe_ms;
      max_ms = std::max(max_ms, pipe_ms);
      ++solved;

      // The oracle only runs when the assignment space is small enough to
      // finish; larger sizes record runtime without a gap column.
      double log_space = 0.0;
      for (const auto& g : inst.group_edges) log_space += std::log((double)g.size());
      std::optional<ExactResult> oracle;
      double oracle_ms = 0.0;
      if (log_space <= std::log(2e6)) {
        auto t1 = std::chrono::steady_clock::now();
        try {
          oracle = exact_solve(inst, a.oracle_cap);
          oracle_ms = wall_ms(t1);
        } catch (const OracleTooLarge&) {
          oracle.reset();
        }
      }

      double pipe_cost = cost(inst, pipe.schedule);
      csv << sizes[si] << ',' << trial << ',' << inst.edges.size() << ','
          << inst.num_groups() << ',' << pipe_ms << ',' << pipe_cost << ',';
      json row = {{"size", sizes[si]},       {"trial", trial},
                  {"edges", inst.edges.size()}, {"groups", inst.num_groups()},
                  {"pipeline_ms", pipe_ms},  {"pipeline_cost", pipe_cost}};
      if (oracle && oracle->feasible()) {
        csv << oracle_ms << ',' << oracle->cost << ',';
        row["oracle_ms"] = oracle_ms;
        row["oracle_cost"] = oracle->cost;
        if (oracle->cost > 1e-12) {
          double gap = 100.0 * (pipe_cost - oracle->cost) / oracle->cost;
          csv << gap;
          row["gap_pct"] = gap;
          sum_gap += gap;
          ++with_gap;
        }
      } else {
        csv << ",,";
      }
      csv << '\n';
      jrows.push_back(std::move(row));
    }
    std::cout << "bench: size=" << sizes[si] << " trials=" << a.trials
              << " mean_pipeline_ms=" << sum_ms / solved << " max_pipeline_ms=" << max_ms;
    if (with_gap > 0) std::cout << " mean_gap_pct=" << sum_gap / with_gap;
    std::cout << "\n";
  }

  if (a.format == "json") {
    atomic_write(join_path(a.outdir, "bench.json"),
                 stamp_json(json{{"rows", jrows}}, man).dump(2) + "\n");
  } else {
    atomic_write(join_path(a.outdir, "bench.csv"), stamp_csv(csv.str(), man));
  }
  write_manifest(man);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-aware recharging rendezvous toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate instances and scenarios");
  gen_cmd->require_subcommand(1);
  CLI::App* gen_evenodd =
      gen_cmd->add_subcommand("evenodd", "Reduce an even-odd partition list to an instance");
  gen_evenodd->add_option("--list", gen.list, "Comma-separated positive integers, one pair per group")
      ->required();
  gen_evenodd->add_option("--outdir", gen.outdir, "Write instance.json and manifest.json here");
  CLI::App* gen_inst = gen_cmd->add_subcommand("instance", "Random benchmark-family instance");
  gen_inst->add_option("--groups", gen.inst.groups, "UAV group count");
  gen_inst->add_option("--vertices", gen.inst.ugv_vertices, "Charger vertex count");
  gen_inst->add_option("--edges-per-group", gen.inst.edges_per_group, "Real edges per group");
  gen_inst->add_option("--budget-scale", gen.inst.budget_scale,
                       "0 = tightest feasible budget, larger loosens");
  gen_inst->add_option("--capacity", gen.inst.capacity, "UAVs per charger vertex");
  gen_inst->add_option("--seed", gen.seed, "Random seed");
  gen_inst->add_option("--outdir", gen.outdir, "Write instance.json and manifest.json here");
  CLI::App* gen_scen = gen_cmd->add_subcommand("scenario", "Parametric patrol scenario");
  gen_scen->add_option("--uavs", gen.scen.uavs, "UAV count");
  gen_scen->add_option("--ugvs", gen.scen.ugvs, "Charger vehicle count");
  gen_scen->add_option("--loop-nodes", gen.scen.loop_nodes, "Waypoints per task loop");
  gen_scen->add_option("--loop-len", gen.scen.loop_len_m, "Task loop length, meters");
  gen_scen->add_option("--field", gen.scen.field_m, "Field edge length, meters");
  gen_scen->add_option("--seed", gen.seed, "Random seed");
  gen_scen->add_option("--outdir", gen.outdir, "Write scenario.json and manifest.json here");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  solve_cmd->add_option("input", solve.input, "Instance JSON path")->required();
  solve_cmd->add_option("--algo", solve.algo, "bicriteria | feasible | exact")
      ->check(CLI::IsMember({"bicriteria", "feasible", "exact"}));
  solve_cmd->add_option("--epsilon", solve.epsilon, "Bicriteria epsilon in (0, 1]");
  solve_cmd->add_option("--rho-override", solve.rho_override,
                        "Replace the instance budget with ln(1/rho)");
  solve_cmd->add_option("--seed", solve.seed, "Recorded in the manifest");
  solve_cmd->add_option("--outdir", solve.outdir, "Artifact directory");

  SimulateArgs simu;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a policy study on a scenario");
  sim_cmd->add_option("input", simu.input, "Scenario JSON path")->required();
  sim_cmd->add_option("--policy", simu.policies,
                      "rrrp | rrrp:bicriteria | rrrp:exact | greedy:<threshold> (repeatable)");
  sim_cmd->add_option("--rho", simu.rhos, "Risk bounds for planner policies (repeatable)");
  sim_cmd->add_option("--trials", simu.trials, "Trials per policy/rho variant");
  CLI::Option* sim_seed = sim_cmd->add_option("--seed", simu.seed, "Base seed override");
  sim_cmd->add_option("--outdir", simu.outdir, "Artifact directory");
  sim_cmd->add_option("--format", simu.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_flag("--summary", simu.with_summary, "Also write bootstrap summaries");
  sim_cmd->add_flag("--logs", simu.with_logs, "Also write per-trial event logs");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Pipeline-vs-oracle benchmark sweep");
  bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated target edge counts");
  bench_cmd->add_option("--trials", bench.trials, "Instances per size");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--outdir", bench.outdir, "Artifact directory");
  bench_cmd->add_option("--format", bench.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--oracle-cap", bench.oracle_cap, "Exact-search node cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen_evenodd->parsed()) {
      gen.kind = "evenodd";
      return cmd_gen(gen);
    }
    if (gen_inst->parsed()) {
      gen.kind = "instance";
      return cmd_gen(gen);
    }
    if (gen_scen->parsed()) {
      gen.kind = "scenario";
      return cmd_gen(gen);
    }
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (sim_cmd->parsed()) {
      simu.seed_set = sim_seed->count() > 0;
      return cmd_simulate(simu);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
