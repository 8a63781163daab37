#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rrrp/model.hpp"

namespace rrrp {

// The exact search hit its node cap before proving an optimum; never a wrong
// answer in disguise.
struct OracleTooLarge : std::runtime_error {
  long long nodes;
  long long cap;
  OracleTooLarge(long long nodes, long long cap)
      : std::runtime_error("exact search exceeded its node cap"), nodes(nodes), cap(cap) {}
};

struct ExactResult {
  std::optional<Schedule> schedule;  // empty: no schedule meets the budget
  double cost = std::numeric_limits<double>::infinity();
  long long nodes = 0;  // branch expansions explored

  bool feasible() const { return schedule.has_value(); }
};

inline constexpr long long kDefaultOracleNodeCap = 10'000'000;

// Ground-truth solver: depth-first branch and bound over one edge choice per
// group.  Groups are ordered by descending cheapest-possible weight and edges
// by ascending cost; branches are cut on the weight lower bound against the
// budget, the cost lower bound against the incumbent, and vertex capacity.
// Throws OracleTooLarge past node_cap.
ExactResult exact_solve(const RendezvousInstance& inst,
                        long long node_cap = kDefaultOracleNodeCap);

// Pick one of z[2j], z[2j+1] from each pair so the chosen and unchosen halves
// sum to the same value.  The classic NP-hard selection problem behind the
// solver's hardness: its gadget below maps YES instances exactly to reduced
// instances whose optimal cost reaches the target.
struct PartitionInstance {
  std::vector<long long> z;

  int pairs() const { return static_cast<int>(z.size()) / 2; }
  double total() const;
  double target() const { return 0.5 * total(); }

  // positive entries, an even number of them
  void validate() const;
};

// Bipartite gadget: group j holds one UAV vertex with two edges onto private
// vertices 2j and 2j+1; edge k carries cost z[k] and weight z[k^1] (cost and
// weight crossed within the pair), budget = target.  Choosing edges with
// total cost C forces total weight 2*target - C, so cost <= target is
// achievable exactly when an even-odd selection splits the set in half.
// Entries above 27 are rejected: their success probabilities exp(-weight)
// would fall below the global probability floor.
RendezvousInstance reduce_evenodd(const PartitionInstance& p);

}  // namespace rrrp
