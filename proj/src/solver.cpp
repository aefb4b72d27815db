#include "ti/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ti {

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  while (exp-- > 0) {
    if (r > (1LL << 62) / std::max(base, 1LL)) return std::numeric_limits<long long>::max();
    r *= base;
  }
  return r;
}

void decode(long long state, int width, int d, std::vector<int>& out) {
  out.resize(width);
  for (int i = width - 1; i >= 0; --i) {
    out[i] = int(state % d);
    state /= d;
  }
}

}  // namespace

SolverResult solve_dp(const TileRuleSet& rules, int height, int width, bool want_witness,
                      long long state_budget) {
  if (height < 1 || width < 1) fail(errc::dimension, "grid must be at least 1x1");
  int d = rules.tile_count();
  if (d == 0) fail(errc::alphabet, "empty tile alphabet");
  long long states = ipow(d, width);
  if (states > state_budget)
    fail(errc::capacity,
         "row state space " + std::to_string(states) + " exceeds budget " +
             std::to_string(state_budget));
  const long long S = states;

  // Cost internal to one row: its horizontal pairs.
  std::vector<long long> row_cost(S, 0);
  std::vector<int> tiles_a, tiles_b;
  for (long long s = 0; s < S; ++s) {
    decode(s, width, d, tiles_a);
    long long c = 0;
    for (int i = 0; i + 1 < width; ++i) c += rules.horizontal_cost(tiles_a[i], tiles_a[i + 1]);
    row_cost[s] = c;
  }

  std::vector<long long> dp(S), next(S);
  for (long long s = 0; s < S; ++s) dp[s] = row_cost[s];
  std::vector<std::vector<int32_t>> parent;
  if (want_witness) parent.reserve(height);

  SolverResult res;
  res.explored_states = S;

  for (int r = 1; r < height; ++r) {
    std::vector<int32_t> par(want_witness ? S : 0, 0);
    std::fill(next.begin(), next.end(), std::numeric_limits<long long>::max());
    for (long long top = 0; top < S; ++top) {
      decode(top, width, d, tiles_a);
      long long base = row_cost[top];
      for (long long bot = 0; bot < S; ++bot) {
        long long below = dp[bot];
        decode(bot, width, d, tiles_b);
        long long trans = 0;
        for (int i = 0; i < width; ++i) trans += rules.vertical_cost(tiles_a[i], tiles_b[i]);
        if (rules.has_squares())
          for (int i = 0; i + 1 < width; ++i)
            trans += rules.square_cost(tiles_a[i], tiles_a[i + 1], tiles_b[i], tiles_b[i + 1]);
        long long cand = below + trans + base;
        if (cand < next[top]) {
          next[top] = cand;
          if (want_witness) par[top] = int32_t(bot);
        }
      }
    }
    dp.swap(next);
    if (want_witness) parent.push_back(std::move(par));
  }

  long long best_state = 0;
  for (long long s = 1; s < S; ++s)
    if (dp[s] < dp[best_state]) best_state = s;
  res.min_cost = dp[best_state];

  if (want_witness) {
    GridTiling t(height, width);
    long long s = best_state;
    for (int r = height - 1; r >= 0; --r) {
      decode(s, width, d, tiles_a);
      for (int c = 0; c < width; ++c) t.at(r, c) = tiles_a[c];
      if (r > 0) s = parent[r - 1][s];
    }
    res.witness = std::move(t);
  }
  return res;
}

SolverResult solve_exhaustive(const TileRuleSet& rules, int height, int width, long long budget) {
  if (height < 1 || width < 1) fail(errc::dimension, "grid must be at least 1x1");
  int d = rules.tile_count();
  long long combos = ipow(d, height * width);
  if (combos > budget)
    fail(errc::capacity, "enumeration size " + std::to_string(combos) + " exceeds budget");

  SolverResult res;
  res.min_cost = std::numeric_limits<long long>::max();
  res.explored_states = combos;
  GridTiling t(height, width);
  std::vector<int> digits(size_t(height) * width, 0);
  for (long long it = 0; it < combos; ++it) {
    for (size_t i = 0; i < digits.size(); ++i) t.cells[i] = digits[i];
    long long cost = 0;
    for (int r = 0; r < height; ++r)
      for (int c = 0; c + 1 < width; ++c) cost += rules.horizontal_cost(t.at(r, c), t.at(r, c + 1));
    for (int r = 0; r + 1 < height; ++r)
      for (int c = 0; c < width; ++c) cost += rules.vertical_cost(t.at(r + 1, c), t.at(r, c));
    if (rules.has_squares())
      for (int r = 0; r + 1 < height; ++r)
        for (int c = 0; c + 1 < width; ++c)
          cost += rules.square_cost(t.at(r + 1, c), t.at(r + 1, c + 1), t.at(r, c), t.at(r, c + 1));
    if (cost < res.min_cost) {
      res.min_cost = cost;
      res.witness = t;
    }
    // increment
    for (size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < d) break;
      digits[i] = 0;
    }
  }
  return res;
}

ThresholdAnswer threshold_decide(const TileRuleSet& rules, int n, long long tau,
                                 long long state_budget) {
  SolverResult r = solve_dp(rules, n, n, false, state_budget);
  return r.min_cost <= tau ? ThresholdAnswer::Below : ThresholdAnswer::AtOrAbove;
}

long long threshold_binary_search(const TileRuleSet& rules, int n, long long lo, long long hi,
                                  int* calls, long long state_budget) {
  int used = 0;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    ++used;
    if (threshold_decide(rules, n, mid, state_budget) == ThresholdAnswer::Below) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (calls) *calls = used;
  return lo;
}

}  // namespace ti
