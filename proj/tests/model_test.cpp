#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "rrrp/model.hpp"
#include "test_util.hpp"

using namespace rrrp;
using rrrp::test::EdgeSpec;
using rrrp::test::make_instance;

TEST_CASE("weight_from_prob") {
  CHECK(weight_from_prob(1.0) == doctest::Approx(0.0));
  CHECK(weight_from_prob(std::exp(-2.0)) == doctest::Approx(2.0));
  CHECK(weight_from_prob(0.5) == doctest::Approx(std::log(2.0)));
  // probabilities are floored before the log
  CHECK(weight_from_prob(0.0) == doctest::Approx(weight_from_prob(kProbFloor)));
  CHECK(weight_from_prob(1e-300) == doctest::Approx(std::log(1e12)));
}

TEST_CASE("finalize accepts a well-formed instance") {
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}, {1, 0.0, 2.0}}, {{0, 3.0, 0.1}}}, 1.0, 2);
  CHECK(inst.num_uav_vertices == 2);
  CHECK(inst.num_groups() == 2);
  CHECK(inst.edge_group == std::vector<int>{0, 0, 1});
  REQUIRE(inst.group_edges.size() == 2);
  CHECK(inst.group_edges[0] == std::vector<int>{0, 1});
  CHECK(inst.group_edges[1] == std::vector<int>{2});
  CHECK(inst.group_of_uav == std::vector<int>{0, 1});
}

TEST_CASE("finalize rejects malformed instances") {
  auto base = [] {
    RendezvousInstance inst;
    inst.uav_groups = {{0}, {1}};
    inst.num_ugv_vertices = 1;
    inst.budget = 1.0;
    Edge e;
    e.u = 0;
    e.g = 0;
    e.prob = 1.0;
    inst.edges = {e, e};
    inst.edges[1].u = 1;
    return inst;
  };

  SUBCASE("gap in UAV ids") {
    auto inst = base();
    inst.uav_groups = {{0}, {2}};
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("overlapping groups") {
    auto inst = base();
    inst.uav_groups = {{0, 1}, {1}};
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("edge endpoint out of range") {
    auto inst = base();
    inst.edges[0].g = 5;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("negative cost") {
    auto inst = base();
    inst.edges[0].cost = -1.0;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("prob out of range") {
    auto inst = base();
    inst.edges[0].prob = 0.0;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
    inst.edges[0].prob = 1.5;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("weight inconsistent with prob") {
    auto inst = base();
    inst.edges[0].prob = 0.5;
    inst.edges[0].weight = 0.5;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("group without edges") {
    auto inst = base();
    inst.uav_groups = {{0, 1}, {2}};
    inst.edges.push_back(inst.edges[0]);
    inst.edges[2].u = 1;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
  SUBCASE("bad capacity and budget") {
    auto inst = base();
    inst.capacity = 0;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
    inst = base();
    inst.budget = -0.5;
    CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  }
}

TEST_CASE("schedule aggregates and feasibility") {
  // group 0: edges 0 (g0, c10, a0.5), 1 (g1, c0, a2); group 1: edge 2 (g0, c3, a0.1)
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}, {1, 0.0, 2.0}}, {{0, 3.0, 0.1}}}, 1.0, 2);

  Schedule s({2, 0});
  CHECK(s.edges == std::vector<int>{0, 2});  // ctor sorts
  CHECK(cost(inst, s) == doctest::Approx(13.0));
  CHECK(weight(inst, s) == doctest::Approx(0.6));
  CHECK(lagrangian_value(inst, s, 2.0) == doctest::Approx(13.0 + 2.0 * 0.6));

  // edges 0 and 2 share UGV vertex 0
  auto rep = is_feasible(inst, s);
  CHECK(rep.one_per_group);
  CHECK_FALSE(rep.copies_ok);
  CHECK(rep.over_copies == std::vector<int>{0});
  CHECK_FALSE(rep.feasible);

  Schedule ok({1, 2});
  rep = is_feasible(inst, ok);
  CHECK_FALSE(rep.budget_ok);  // weight 2.1 > budget 1
  CHECK_FALSE(rep.feasible);
  CHECK(rep.one_per_group);
  CHECK(rep.copies_ok);

  Schedule missing({0});
  rep = is_feasible(inst, missing);
  CHECK_FALSE(rep.one_per_group);
  CHECK(rep.bad_groups == std::vector<int>{1});

  auto audit = audit_copy_load(inst, s);
  CHECK(audit.max_load == 2);
  CHECK(audit.vertices_at_two == 1);
  CHECK(audit.vertices_above_two == 0);
}

TEST_CASE("capacity relaxes the copy constraint") {
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}}, {{0, 3.0, 0.1}}}, 5.0, 1, 2);
  auto rep = is_feasible(inst, Schedule({0, 1}));
  CHECK(rep.copies_ok);
  CHECK(rep.feasible);
}

TEST_CASE("json round trip") {
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}, {1, 0.0, 2.0}}, {{0, 3.0, 0.1}}}, 1.25, 2, 1);
  std::string text = to_json(inst);
  RendezvousInstance back = instance_from_json(text);
  CHECK(back.uav_groups == inst.uav_groups);
  CHECK(back.num_ugv_vertices == inst.num_ugv_vertices);
  CHECK(back.budget == doctest::Approx(inst.budget));
  CHECK(back.capacity == inst.capacity);
  REQUIRE(back.edges.size() == inst.edges.size());
  for (size_t i = 0; i < inst.edges.size(); ++i) {
    CHECK(back.edges[i].u == inst.edges[i].u);
    CHECK(back.edges[i].g == inst.edges[i].g);
    CHECK(back.edges[i].cost == doctest::Approx(inst.edges[i].cost));
    CHECK(back.edges[i].prob == doctest::Approx(inst.edges[i].prob));
    CHECK(back.edges[i].weight == doctest::Approx(inst.edges[i].weight));
  }

  std::string path = "model_test_roundtrip.json";
  save_instance(inst, path);
  RendezvousInstance loaded = load_instance(path);
  CHECK(loaded.edges.size() == inst.edges.size());
  CHECK(loaded.budget == doctest::Approx(inst.budget));
  std::remove(path.c_str());

  CHECK_THROWS(instance_from_json("{\"nope\":1}"));
  CHECK_THROWS(load_instance("does_not_exist.json"));
}
