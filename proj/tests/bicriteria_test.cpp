#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rrrp/bicriteria.hpp"
#include "rrrp/lagrangian.hpp"
#include "rrrp/local_search.hpp"
#include "rrrp/model.hpp"
#include "test_util.hpp"

using namespace rrrp;
using test::EdgeSpec;

namespace {

std::pair<double, double> weight_extremes(const RendezvousInstance& inst) {
  double wmin = std::numeric_limits<double>::infinity();
  test::enumerate_schedules(inst, [&](const std::vector<int>& ids) {
    wmin = std::min(wmin, weight(inst, Schedule(ids)));
  });
  Schedule cheap = *test::brute_force_lagrangian(inst, 0.0);
  return {wmin, weight(inst, cheap)};
}

int edges_per_group_ok(const RendezvousInstance& inst, const Schedule& s) {
  std::vector<int> per(inst.num_groups(), 0);
  for (int e : s.edges) per[inst.edge_group[e]]++;
  for (int c : per)
    if (c != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("exchange keeps m1 when the first swap already overshoots") {
  // one group: a safe expensive detour vs a cheap risky skip
  auto inst = test::make_instance({{{0, 10.0, 0.5}, {1, 0.0, 2.0}}}, 1.0, 2);
  Schedule m1({0}), m2({1});

  ExchangeDiagnostics seen;
  auto out = exchange_step(inst, m1, m2, 7.0, [&](const ExchangeDiagnostics& d) { seen = d; });
  CHECK(out == m1);
  CHECK(seen.returned_m1);
  CHECK(seen.trimmed == 0);
  CHECK(seen.k == 2);
  CHECK(seen.max_prefix <= 1e-9);
  // gap at lambda=7: (0 + 14) - (10 + 3.5) = 0.5
  CHECK(seen.gap == doctest::Approx(0.5));
  CHECK(seen.alpha_sum == doctest::Approx(-0.5));
}

TEST_CASE("exchange swaps a prefix and leaves one doubled vertex") {
  // chain of three groups: detours cost 10 at weight 0.2, skips cost 0 at
  // weight 1.2; adjacent options share vertices so the difference is one path
  auto inst = test::make_instance(
      {
          {{0, 10.0, 0.2}, {1, 0.0, 1.2}},
          {{1, 10.0, 0.2}, {2, 0.0, 1.2}},
          {{2, 10.0, 0.2}, {3, 0.0, 1.2}},
      },
      2.0, 4);
  Schedule m1({0, 2, 4}), m2({1, 3, 5});

  ExchangeDiagnostics seen;
  auto out =
      exchange_step(inst, m1, m2, 10.5, [&](const ExchangeDiagnostics& d) { seen = d; });

  CHECK(out == Schedule({1, 2, 4}));
  CHECK(weight(inst, out) == doctest::Approx(1.6));
  CHECK(cost(inst, out) == doctest::Approx(20.0));

  CHECK(seen.k == 6);
  CHECK(seen.start == 1);
  CHECK(seen.trimmed == 1);
  CHECK_FALSE(seen.returned_m1);
  CHECK(seen.group_dup_dropped);
  CHECK_FALSE(seen.copy_rerouted);
  CHECK(seen.copy_at_two);
  CHECK(seen.gap == doctest::Approx(1.5));
  CHECK(seen.alpha_sum == doctest::Approx(-1.5));
  CHECK(seen.max_prefix == doctest::Approx(-0.5));

  auto load = audit_copy_load(inst, out);
  CHECK(load.max_load == 2);
  CHECK(load.vertices_at_two == 1);
  CHECK(load.vertices_above_two == 0);
}

TEST_CASE("exchange reroutes the doubled vertex to a free twin") {
  // same chain, but group 0 has a twin of its skip on a spare vertex with
  // identical cost and weight, so the doubled vertex can be vacated
  auto inst = test::make_instance(
      {
          {{0, 10.0, 0.2}, {1, 0.0, 1.2}, {4, 0.0, 1.2}},
          {{1, 10.0, 0.2}, {2, 0.0, 1.2}},
          {{2, 10.0, 0.2}, {3, 0.0, 1.2}},
      },
      2.0, 5);
  Schedule m1({0, 3, 5}), m2({1, 4, 6});

  ExchangeDiagnostics seen;
  auto out =
      exchange_step(inst, m1, m2, 10.5, [&](const ExchangeDiagnostics& d) { seen = d; });

  // the prefix swap doubles v1; group 0's twin edge 2 lands on free v4
  CHECK(out == Schedule({2, 3, 5}));
  CHECK(seen.copy_rerouted);
  CHECK_FALSE(seen.copy_at_two);
  auto load = audit_copy_load(inst, out);
  CHECK(load.max_load == 1);
}

TEST_CASE("exchange validates its inputs") {
  auto inst = test::make_instance(
      {
          {{0, 10.0, 1.0}, {1, 1.0, 2.0}},
          {{2, 10.0, 1.0}, {3, 1.0, 2.0}},
      },
      3.0, 4);
  // two components
  CHECK_THROWS_AS(exchange_step(inst, Schedule({0, 2}), Schedule({1, 3}), 1.0),
                  std::invalid_argument);
  // budget sides swapped
  CHECK_THROWS_AS(exchange_step(inst, Schedule({1, 3}), Schedule({0, 2}), 1.0),
                  std::invalid_argument);
}

TEST_CASE("single UAV must take the safe detour") {
  auto inst = test::make_instance({{{0, 10.0, 0.5}, {1, 0.0, 2.0}}}, 1.0, 2);

  auto res = bicriteria_solve(inst);
  CHECK(res.schedule == Schedule({0}));
  CHECK(res.cost == doctest::Approx(10.0));
  CHECK(res.weight == doctest::Approx(0.5));
  CHECK(res.guess.empty());
  CHECK(res.guesses_tried == 2);  // empty guess plus {edge 0}
  CHECK(res.load.max_load == 1);
  CHECK_FALSE(res.fallback_used);
}

TEST_CASE("bicriteria rejects bad epsilon, capacity, and hopeless budgets") {
  auto inst = test::make_instance({{{0, 1.0, 0.5}}}, 1.0, 1);
  BicriteriaOptions opts;
  opts.epsilon = 0.0;
  CHECK_THROWS_AS(bicriteria_solve(inst, opts), std::invalid_argument);
  opts.epsilon = 1.5;
  CHECK_THROWS_AS(bicriteria_solve(inst, opts), std::invalid_argument);
  opts.epsilon = -0.25;
  CHECK_THROWS_AS(bicriteria_solve(inst, opts), std::invalid_argument);

  auto cap2 = test::make_instance({{{0, 1.0, 0.5}}}, 1.0, 1, 2);
  CHECK_THROWS_AS(bicriteria_solve(cap2), std::invalid_argument);

  auto tight = test::make_instance({{{0, 1.0, 0.5}}}, 0.1, 1);
  CHECK_THROWS_AS(bicriteria_solve(tight), InfeasibleInstance);
}

TEST_CASE("bicriteria output meets the guarantee on random instances") {
  int solved = 0, violations_seen = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = test::random_instance(seed, 4 + static_cast<int>(seed % 3), 5, 3, 0.0);
    auto [wmin, w0] = weight_extremes(inst);
    if (w0 <= wmin + 1e-9) continue;
    inst.budget = 0.5 * (wmin + w0);

    auto opt = test::brute_force_exact(inst);
    REQUIRE(opt.has_value());
    double opt_cost = cost(inst, *opt);

    for (double eps : {1.0, 0.5}) {
      BicriteriaOptions opts;
      opts.epsilon = eps;
      double worst_prefix = -std::numeric_limits<double>::infinity();
      opts.observer = [&](const ExchangeDiagnostics& d) {
        worst_prefix = std::max(worst_prefix, d.max_prefix);
        CHECK(d.gap >= -1e-9);
      };

      auto res = bicriteria_solve(inst, opts);
      ++solved;

      CHECK(res.weight <= inst.budget + kBudgetSlack);
      CHECK(edges_per_group_ok(inst, res.schedule));
      CHECK(res.load.max_load <= 2);
      CHECK(res.load.vertices_at_two <= 1);
      CHECK(res.load.vertices_above_two == 0);
      CHECK(res.cost <= (1.0 + eps) * opt_cost + res.gap + 1e-6 * std::max(1.0, opt_cost));
      if (res.load.max_load == 2) ++violations_seen;

      if (worst_prefix > -std::numeric_limits<double>::infinity())
        CHECK(worst_prefix <= 1e-9);
    }
  }
  CHECK(solved >= 30);
}

TEST_CASE("solve_feasible substitutes a feasible schedule on copy violations") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = test::random_instance(seed, 5, 4, 3, 0.0);
    auto [wmin, w0] = weight_extremes(inst);
    if (w0 <= wmin + 1e-9) continue;
    inst.budget = 0.5 * (wmin + w0);

    auto res = solve_feasible(inst);
    CHECK(res.load.max_load <= inst.capacity);
    CHECK(is_feasible(inst, res.schedule).feasible);
    if (res.fallback_used) {
      CHECK(res.guess.empty());
    }
  }
}

TEST_CASE("guess pruning never beats the full enumeration") {
  for (std::uint64_t seed = 3; seed <= 12; ++seed) {
    auto inst = test::random_instance(seed, 4, 5, 3, 0.0);
    auto [wmin, w0] = weight_extremes(inst);
    if (w0 <= wmin + 1e-9) continue;
    inst.budget = 0.5 * (wmin + w0);

    BicriteriaOptions full, pruned;
    pruned.guess_prune = true;
    auto rf = bicriteria_solve(inst, full);
    auto rp = bicriteria_solve(inst, pruned);
    CHECK(rf.cost <= rp.cost + 1e-9);
    CHECK(rp.guesses_tried <= rf.guesses_tried);
  }
}

TEST_CASE("feasible_pipeline always returns a fully feasible schedule") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = test::random_instance(seed, 5, 6, 3, 0.0);
    auto [wmin, w0] = weight_extremes(inst);
    if (w0 <= wmin + 1e-9) continue;
    inst.budget = 0.5 * (wmin + w0);

    auto res = feasible_pipeline(inst);
    CHECK(is_feasible(inst, res.schedule).feasible);
    CHECK(res.cost == doctest::Approx(cost(inst, res.schedule)));

    auto opt = test::brute_force_exact(inst);
    REQUIRE(opt.has_value());
    double opt_cost = cost(inst, *opt);
    CHECK(res.cost >= opt_cost - 1e-9);
    if (res.optimal) {
      CHECK(res.cost == doctest::Approx(opt_cost));
    } else {
      double bound = opt_cost + res.lambda * inst.budget;
      CHECK(res.cost <= bound * (1.0 + 1e-6) + 1e-9);
    }
  }
}
