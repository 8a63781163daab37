#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrrp/flow.hpp"
#include "test_util.hpp"

using namespace rrrp;
using rrrp::test::EdgeSpec;
using rrrp::test::make_instance;

TEST_CASE("arc cost ordering") {
  CHECK(ArcCost{1.0, 5.0} < ArcCost{2.0, 0.0});
  CHECK(ArcCost{1.0, 1.0} < ArcCost{1.0, 2.0});
  CHECK_FALSE(ArcCost{1.0, 2.0} < ArcCost{1.0, 2.0});
  CHECK(ArcCost{1.0, 2.0} == ArcCost{1.0, 2.0});
  ArcCost s = ArcCost{1.0, 2.0} + ArcCost{3.0, 4.0};
  CHECK(s == ArcCost{4.0, 6.0});
}

TEST_CASE("min cost flow on a hand-checked network") {
  // s=0, a=1, b=2, t=3
  FlowNetwork net(4, 0, 3, 3);
  int sa = net.add_arc(0, 1, 2, {1.0, 0.0});
  int sb = net.add_arc(0, 2, 1, {2.0, 0.0});
  int at = net.add_arc(1, 3, 1, {3.0, 0.0});
  int ab = net.add_arc(1, 2, 1, {1.0, 0.0});
  int bt = net.add_arc(2, 3, 2, {1.0, 0.0});

  auto res = min_cost_flow(net);
  CHECK(res.flow_value == 3);
  CHECK(res.total.primary == doctest::Approx(10.0));
  CHECK(res.arc_flow[sa] == 2);
  CHECK(res.arc_flow[sb] == 1);
  CHECK(res.arc_flow[at] == 1);
  CHECK(res.arc_flow[ab] == 1);
  CHECK(res.arc_flow[bt] == 2);

  net.required_flow = 4;
  CHECK_THROWS_AS(min_cost_flow(net), FlowInfeasible);
  try {
    min_cost_flow(net);
  } catch (const FlowInfeasible& e) {
    CHECK(e.achieved == 3);
    CHECK(e.required == 4);
  }
}

TEST_CASE("tie component picks among equal primaries") {
  FlowNetwork net(4, 0, 3, 1);
  net.add_arc(0, 1, 1, {0.0, 0.0});
  net.add_arc(0, 2, 1, {0.0, 0.0});
  int high_tie = net.add_arc(1, 3, 1, {5.0, 2.0});
  int low_tie = net.add_arc(2, 3, 1, {5.0, 1.0});
  auto res = min_cost_flow(net);
  CHECK(res.total == ArcCost{5.0, 1.0});
  CHECK(res.arc_flow[low_tie] == 1);
  CHECK(res.arc_flow[high_tie] == 0);
}

TEST_CASE("arc validation") {
  FlowNetwork net(3, 0, 2, 1);
  CHECK_THROWS_AS(net.add_arc(0, 5, 1, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(net.add_arc(0, 1, -1, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(net.add_arc(0, 1, 1, {-1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(net.add_arc(0, 1, 1, {0.0, -1.0}), std::invalid_argument);
  // negative tie behind positive primary is fine
  CHECK(net.add_arc(0, 1, 1, {1.0, -5.0}) >= 0);
}

TEST_CASE("rendezvous network shape") {
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}, {1, 0.0, 2.0}}, {{0, 3.0, 0.1}}}, 1.0, 2);
  FlowNetwork net = FlowNetwork::from_instance(inst, 2.0);
  // source + 2 aggregators + 2 uav + 2 ugv + sink
  CHECK(net.num_nodes == 8);
  CHECK(net.required_flow == 2);
  // 2 source arcs + 2 group arcs + 3 edges + 2 sink arcs
  CHECK(net.arcs.size() == 9);
  int tagged = 0;
  for (const auto& arc : net.arcs) {
    if (arc.tag >= 0) {
      ++tagged;
      const Edge& e = inst.edges[arc.tag];
      CHECK(arc.cost.primary == doctest::Approx(e.cost + 2.0 * e.weight));
      CHECK(arc.cost.tie == doctest::Approx(e.weight));
    }
  }
  CHECK(tagged == 3);
}

TEST_CASE("lagrangian solve picks the cheap risky edge at high lambda") {
  // detour: c=10, a=0.5; null: c=0, a=2.  At lambda=100 the weights dominate.
  RendezvousInstance inst = make_instance({{{0, 10.0, 0.5}, {1, 0.0, 2.0}}}, 1.0, 2);
  Schedule s = solve_lagrangian(inst, 100.0);
  CHECK(s.edges == std::vector<int>{0});  // 10 + 50 < 0 + 200
  s = solve_lagrangian(inst, 0.0);
  CHECK(s.edges == std::vector<int>{1});  // cost only
  CHECK_THROWS_AS(solve_lagrangian(inst, -1.0), std::invalid_argument);
}

TEST_CASE("solver reuses its network across lambda values") {
  RendezvousInstance inst = make_instance(
      {{{0, 10.0, 0.5}, {1, 0.0, 2.0}}, {{0, 3.0, 0.1}, {1, 1.0, 1.0}}}, 1.0, 2);
  LagrangianSolver solver(inst);
  for (double lambda : {0.0, 0.5, 1.0, 2.0, 7.0, 50.0}) {
    Schedule got = solver.solve(lambda);
    auto want = rrrp::test::brute_force_lagrangian(inst, lambda);
    REQUIRE(want.has_value());
    CHECK(lagrangian_value(inst, got, lambda) ==
          doctest::Approx(lagrangian_value(inst, *want, lambda)).epsilon(1e-12));
    CHECK(weight(inst, got) == doctest::Approx(weight(inst, *want)).epsilon(1e-12));
  }
}

TEST_CASE("min weight schedule matches brute force") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    RendezvousInstance inst = rrrp::test::random_instance(seed, 4, 5, 3, 10.0);
    Schedule got = min_weight_schedule(inst);
    double best = std::numeric_limits<double>::infinity();
    rrrp::test::enumerate_schedules(inst, [&](const std::vector<int>& ids) {
      best = std::min(best, weight(inst, Schedule(ids)));
    });
    CHECK(weight(inst, got) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("solver agrees with brute force on random instances") {
  const double lambdas[] = {0.0, 0.3, 1.0, 3.7, 10.0, 100.0};
  for (uint64_t seed = 0; seed < 60; ++seed) {
    int groups = 2 + static_cast<int>(seed % 4);
    int ugv = 3 + static_cast<int>(seed % 3);
    RendezvousInstance inst = rrrp::test::random_instance(seed, groups, ugv, 4, 10.0);
    LagrangianSolver solver(inst);
    for (double lambda : lambdas) {
      Schedule got = solver.solve(lambda);
      auto want = rrrp::test::brute_force_lagrangian(inst, lambda);
      REQUIRE(want.has_value());
      auto rep = is_feasible(inst, got);
      CHECK(rep.one_per_group);
      CHECK(rep.copies_ok);
      CHECK(lagrangian_value(inst, got, lambda) ==
            doctest::Approx(lagrangian_value(inst, *want, lambda)).epsilon(1e-9));
      // among equal objectives the solver prefers lower weight
      CHECK(weight(inst, got) <= weight(inst, *want) + 1e-9);
    }
  }
}

TEST_CASE("copy capacity above one is honored") {
  for (uint64_t seed = 100; seed < 110; ++seed) {
    RendezvousInstance inst = rrrp::test::random_instance(seed, 4, 2, 3, 10.0, 2);
    LagrangianSolver solver(inst);
    for (double lambda : {0.0, 1.0, 5.0}) {
      Schedule got = solver.solve(lambda);
      auto want = rrrp::test::brute_force_lagrangian(inst, lambda);
      REQUIRE(want.has_value());
      auto rep = is_feasible(inst, got);
      CHECK(rep.one_per_group);
      CHECK(rep.copies_ok);
      CHECK(lagrangian_value(inst, got, lambda) ==
            doctest::Approx(lagrangian_value(inst, *want, lambda)).epsilon(1e-9));
    }
  }
}

TEST_CASE("over-subscribed vertices make the flow infeasible") {
  // two groups, single UGV vertex, no nulls
  RendezvousInstance inst = make_instance({{{0, 1.0, 0.5}}, {{0, 2.0, 0.5}}}, 5.0, 1);
  CHECK_THROWS_AS(solve_lagrangian(inst, 1.0), FlowInfeasible);
}
