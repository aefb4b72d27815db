#pragma once

#include <optional>

#include "ti/tiles.hpp"

namespace ti {

inline constexpr long long kDefaultStateBudget = 20'000'000;

struct SolverResult {
  long long min_cost = 0;
  std::optional<GridTiling> witness;
  long long explored_states = 0;
};

// Exact minimum over all tilings of a height x width grid, by row-state
// dynamic programming. Ties in witness reconstruction break toward the
// lexicographically smallest row state.
SolverResult solve_dp(const TileRuleSet& rules, int height, int width, bool want_witness = false,
                      long long state_budget = kDefaultStateBudget);

// Exact minimum by full enumeration; the ground-truth oracle.
SolverResult solve_exhaustive(const TileRuleSet& rules, int height, int width,
                              long long budget = kDefaultStateBudget);

enum class ThresholdAnswer { Below, AtOrAbove };

// Whether the optimum of the n x n instance is <= tau.
ThresholdAnswer threshold_decide(const TileRuleSet& rules, int n, long long tau,
                                 long long state_budget = kDefaultStateBudget);

// Reconstructs the optimum via binary search over threshold_decide calls on
// the range [lo, hi]; `calls` reports how many decisions were made.
long long threshold_binary_search(const TileRuleSet& rules, int n, long long lo, long long hi,
                                  int* calls = nullptr,
                                  long long state_budget = kDefaultStateBudget);

}  // namespace ti
