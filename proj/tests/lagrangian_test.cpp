#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrrp/flow.hpp"
#include "rrrp/lagrangian.hpp"
#include "test_util.hpp"

using namespace rrrp;
using rrrp::test::EdgeSpec;
using rrrp::test::make_instance;

// Frozen crossover: detour (c=10, a=0.5) vs null (c=0, a=2), budget 1.
// Equal Lagrangians at 10 + 0.5*l = 2*l, i.e. l* = 20/3.
TEST_CASE("bisection brackets the known crossover") {
  RendezvousInstance inst = make_instance({{{0, 10.0, 0.5}, {1, 0.0, 2.0}}}, 1.0, 2);
  auto res = binary_search(inst);
  CHECK_FALSE(res.is_optimal());
  REQUIRE(res.certificate.has_value());
  const auto& cert = *res.certificate;
  CHECK(cert.m1.edges == std::vector<int>{0});
  CHECK(cert.m2.edges == std::vector<int>{1});
  const double star = 20.0 / 3.0;
  CHECK(cert.lambda_lo <= star + 1e-12);
  CHECK(cert.lambda_hi >= star - 1e-12);
  CHECK(cert.lambda == cert.lambda_hi);
  CHECK(cert.lambda_hi - cert.lambda_lo < default_dlambda_min(inst) + 1e-15);
  CHECK(cert.gap >= 0.0);
  CHECK(weight(inst, cert.m1) <= inst.budget + kBudgetSlack);
  CHECK(weight(inst, cert.m2) > inst.budget + kBudgetSlack);
}

TEST_CASE("lambda zero optimum inside the budget short-circuits") {
  // both groups can take zero-weight options within budget
  RendezvousInstance inst = make_instance(
      {{{0, 5.0, 0.0}, {1, 1.0, 0.05}}, {{2, 4.0, 0.0}}}, 0.1, 3);
  auto res = binary_search(inst);
  CHECK(res.shortcut == BinarySearchResult::Shortcut::BudgetSlack);
  REQUIRE(res.is_optimal());
  CHECK(cost(inst, *res.optimal) == doctest::Approx(1.0 + 4.0));
  CHECK(weight(inst, *res.optimal) <= inst.budget + kBudgetSlack);
}

TEST_CASE("infeasible budgets raise with the achievable minimum") {
  RendezvousInstance inst = make_instance({{{0, 1.0, 2.0}, {1, 5.0, 1.5}}}, 1.0, 2);
  CHECK_THROWS_AS(binary_search(inst), InfeasibleInstance);
  try {
    binary_search(inst);
  } catch (const InfeasibleInstance& e) {
    CHECK(e.min_weight == doctest::Approx(1.5));
    CHECK(e.budget == doctest::Approx(1.0));
  }
}

TEST_CASE("iterate landing exactly on the budget is optimal") {
  // lambda=0 picks (c=0,a=2) which is over budget; the only feasible schedule
  // has weight exactly 1 = B, so the first feasible iterate returns as tight.
  RendezvousInstance inst = make_instance({{{0, 0.0, 2.0}, {1, 10.0, 1.0}}}, 1.0, 2);
  auto res = binary_search(inst);
  REQUIRE(res.is_optimal());
  CHECK(res.shortcut == BinarySearchResult::Shortcut::BudgetTight);
  CHECK(weight(inst, *res.optimal) == doctest::Approx(1.0));
  CHECK(cost(inst, *res.optimal) == doctest::Approx(10.0));
}

TEST_CASE("certificate m1 is subproblem optimal at its lambda") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    int groups = 2 + static_cast<int>(seed % 3);
    RendezvousInstance inst =
        rrrp::test::random_instance(seed, groups, 4, 3, 0.35 * groups);
    BinarySearchResult res;
    try {
      res = binary_search(inst);
    } catch (const InfeasibleInstance&) {
      continue;
    }
    if (res.is_optimal()) {
      auto exact = rrrp::test::brute_force_exact(inst);
      REQUIRE(exact.has_value());
      CHECK(cost(inst, *res.optimal) == doctest::Approx(cost(inst, *exact)).epsilon(1e-9));
      continue;
    }
    const auto& cert = *res.certificate;
    CHECK(weight(inst, cert.m1) <= inst.budget + kBudgetSlack);
    CHECK(weight(inst, cert.m2) > inst.budget + kBudgetSlack);
    CHECK(cert.gap >= 0.0);
    CHECK(cert.lambda_hi - cert.lambda_lo < default_dlambda_min(inst) + 1e-15);
    auto sub = rrrp::test::brute_force_lagrangian(inst, cert.lambda);
    REQUIRE(sub.has_value());
    CHECK(lagrangian_value(inst, cert.m1, cert.lambda) ==
          doctest::Approx(lagrangian_value(inst, *sub, cert.lambda)).epsilon(1e-9));
    // Lagrangian lower bound: c(m1) <= opt + lambda * budget
    auto exact = rrrp::test::brute_force_exact(inst);
    if (exact) {
      CHECK(cost(inst, cert.m1) <=
            cost(inst, *exact) + cert.lambda * inst.budget + 1e-6);
    }
  }
}

TEST_CASE("subproblem weight decreases and cost increases along lambda") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    RendezvousInstance inst = rrrp::test::random_instance(seed + 500, 3, 4, 3, 5.0);
    LagrangianSolver solver(inst);
    double prev_w = std::numeric_limits<double>::infinity();
    double prev_c = -1.0;
    for (int k = 0; k <= 20; ++k) {
      double lambda = 0.5 * k;
      Schedule s = solver.solve(lambda);
      double w = weight(inst, s);
      double c = cost(inst, s);
      CHECK(w <= prev_w + 1e-9);
      CHECK(c >= prev_c - 1e-9);
      prev_w = w;
      prev_c = c;
    }
  }
}
