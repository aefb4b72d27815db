#include <algorithm>
#include <climits>
#include <numeric>

#include "doctest.h"
#include "ti/common.hpp"
#include "ti/tiles.hpp"

using namespace ti;

namespace {

TileRuleSet abc_rules() {
  TileRuleSet r;
  r.tiles = {{"a", {}, false}, {"b", {}, false}, {"c", {}, false}};
  return r;
}

TileRuleSet random_rules(SplitMix64& rng, int d, bool with_squares) {
  TileRuleSet r;
  for (int i = 0; i < d; ++i) r.tiles.push_back({std::string(1, char('a' + i)), {}, false});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      r.add_horizontal(a, b, (long long)rng.below(3));
      r.add_vertical(a, b, (long long)rng.below(3));
    }
  if (with_squares) {
    int count = 2 + int(rng.below(4));
    for (int i = 0; i < count; ++i)
      r.add_square(int(rng.below(d)), int(rng.below(d)), int(rng.below(d)), int(rng.below(d)),
                   1 + (long long)rng.below(2));
  }
  return r;
}

GridTiling random_tiling(SplitMix64& rng, int rows, int cols, int d) {
  GridTiling t(rows, cols);
  for (auto& c : t.cells) c = int(rng.below(d));
  return t;
}

// Independent re-summation, written as plainly as possible.
long long brute_eval(const TileRuleSet& r, const GridTiling& t) {
  long long total = 0;
  for (int row = 0; row < t.rows; ++row)
    for (int col = 0; col < t.cols; ++col) {
      if (col + 1 < t.cols) total += r.horizontal_cost(t.at(row, col), t.at(row, col + 1));
      if (row + 1 < t.rows) total += r.vertical_cost(t.at(row + 1, col), t.at(row, col));
      if (row + 1 < t.rows && col + 1 < t.cols)
        total += r.square_cost(t.at(row + 1, col), t.at(row + 1, col + 1), t.at(row, col),
                               t.at(row, col + 1));
    }
  return total;
}

}  // namespace

TEST_CASE("zero-cost rules evaluate to zero") {
  TileRuleSet r = abc_rules();
  GridTiling t(3, 3, 0);
  CHECK(evaluate_tiling(r, t) == 0);
}

TEST_CASE("single mismatched horizontal pair") {
  TileRuleSet r = abc_rules();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) r.add_horizontal(a, b, 1);
  GridTiling t(2, 2, 0);
  t.at(0, 1) = 1;  // bottom row reads a b, top row a a
  CHECK(evaluate_tiling(r, t) == 1);
}

TEST_CASE("evaluation matches an independent summation oracle") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    TileRuleSet r = random_rules(rng, 3, true);
    GridTiling t = random_tiling(rng, 3, 3, 3);
    CHECK(evaluate_tiling(r, t) == brute_eval(r, t));
  }
}

TEST_CASE("evaluation is invariant under alphabet relabeling") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    TileRuleSet r = random_rules(rng, 3, true);
    GridTiling t = random_tiling(rng, 3, 4, 3);
    std::vector<int> perm = {0, 1, 2};
    for (int i = 2; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    TileRuleSet r2 = abc_rules();
    for (auto& [k, v] : r.horizontal) r2.add_horizontal(perm[k >> 32], perm[k & 0xffffffff], v);
    for (auto& [k, v] : r.vertical) r2.add_vertical(perm[k >> 32], perm[k & 0xffffffff], v);
    for (auto& [k, v] : r.squares)
      r2.add_square(perm[(k >> 48) & 0xffff], perm[(k >> 32) & 0xffff], perm[(k >> 16) & 0xffff],
                    perm[k & 0xffff], v);
    GridTiling t2 = t;
    for (auto& c : t2.cells) c = perm[c];
    CHECK(evaluate_tiling(r, t) == evaluate_tiling(r2, t2));
  }
}

TEST_CASE("evaluation is additive over a constraint partition") {
  SplitMix64 rng(13);
  TileRuleSet r = random_rules(rng, 3, true);
  GridTiling t = random_tiling(rng, 4, 4, 3);

  TileRuleSet horizontal_only = r, rest = r;
  horizontal_only.vertical.clear();
  horizontal_only.squares.clear();
  rest.horizontal.clear();
  CHECK(evaluate_tiling(r, t) ==
        evaluate_tiling(horizontal_only, t) + evaluate_tiling(rest, t));
}

TEST_CASE("dimension and alphabet errors") {
  TileRuleSet r = abc_rules();
  GridTiling t(1, 3, 0);
  CHECK_THROWS_AS(evaluate_tiling(r, t), error);
  GridTiling t2(2, 2, 0);
  t2.at(0, 0) = 7;
  CHECK_THROWS_AS(evaluate_tiling(r, t2), error);
}

TEST_CASE("rules and tilings round-trip through json") {
  SplitMix64 rng(14);
  TileRuleSet r = random_rules(rng, 3, true);
  TileRuleSet r2 = rules_from_json(rules_to_json(r));
  GridTiling t = random_tiling(rng, 3, 3, 3);
  CHECK(evaluate_tiling(r, t) == evaluate_tiling(r2, t));
  GridTiling t2 = tiling_from_json(r2, tiling_to_json(r2, t));
  CHECK(t2.cells == t.cells);
}

// --- square -> pair compilation -------------------------------------------------

namespace {

// Minimum over all interior assignments of a bordered grid (ring fixed).
long long bordered_min(const TileRuleSet& rules, int rows, int cols, int border,
                       const std::vector<int>& interior_alphabet) {
  GridTiling t(rows + 2, cols + 2, border);
  long long best = LLONG_MAX;
  std::vector<int> digits(size_t(rows) * cols, 0);
  int d = int(interior_alphabet.size());
  long long combos = 1;
  for (int i = 0; i < rows * cols; ++i) combos *= d;
  for (long long it = 0; it < combos; ++it) {
    for (int rr = 0; rr < rows; ++rr)
      for (int cc = 0; cc < cols; ++cc)
        t.at(rr + 1, cc + 1) = interior_alphabet[digits[size_t(rr) * cols + cc]];
    best = std::min(best, evaluate_tiling(rules, t));
    for (size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < d) break;
      digits[i] = 0;
    }
  }
  return best;
}

long long plain_min(const TileRuleSet& rules, int rows, int cols) {
  long long best = LLONG_MAX;
  int d = rules.tile_count();
  GridTiling t(rows, cols);
  std::vector<int> digits(size_t(rows) * cols, 0);
  long long combos = 1;
  for (int i = 0; i < rows * cols; ++i) combos *= d;
  for (long long it = 0; it < combos; ++it) {
    for (size_t i = 0; i < digits.size(); ++i) t.cells[i] = digits[i];
    best = std::min(best, evaluate_tiling(rules, t));
    for (size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < d) break;
      digits[i] = 0;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("pair compilation reproduces costs of consistent tilings exactly") {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 25; ++trial) {
    TileRuleSet r = random_rules(rng, 3, true);
    PairCompilation comp = compile_squares_to_pairs(r, 4);
    GridTiling orig = random_tiling(rng, 3, 3, 3);
    GridTiling compiled = compile_tiling_to_pairs(comp, orig);
    CHECK(evaluate_tiling(comp.rules, compiled) == evaluate_tiling(r, orig));
  }
}

TEST_CASE("a single illegal square becomes a vertical pair cost") {
  TileRuleSet r = abc_rules();
  r.add_square(0, 0, 0, 0, 1);  // pattern a,a / a,a
  PairCompilation comp = compile_squares_to_pairs(r, 3);
  int aa = comp.combined(0, 0);
  CHECK(comp.rules.vertical_cost(aa, aa) == 1);
}

TEST_CASE("inconsistent adjacent combined tiles cost at least the penalty") {
  TileRuleSet r = abc_rules();
  r.add_square(0, 1, 2, 0, 1);
  PairCompilation comp = compile_squares_to_pairs(r, 3);
  int xa = comp.combined(2, 0);  // [c,a]
  int by = comp.combined(1, 2);  // [b,c] with a != b on the shared column
  GridTiling t(2, 2);
  t.at(0, 0) = xa;
  t.at(0, 1) = by;
  t.at(1, 0) = xa;
  t.at(1, 1) = by;
  CHECK(evaluate_tiling(comp.rules, t) >= comp.consistency_penalty);
}

TEST_CASE("pair compilation with no squares keeps every 3x3 cost, hence the minimum") {
  SplitMix64 rng(16);
  TileRuleSet r = random_rules(rng, 2, false);
  PairCompilation comp = compile_squares_to_pairs(r, 3);
  long long best_orig = LLONG_MAX, best_compiled = LLONG_MAX;
  GridTiling t(3, 3);
  for (int it = 0; it < 512; ++it) {
    for (int i = 0; i < 9; ++i) t.cells[i] = (it >> i) & 1;
    long long orig = evaluate_tiling(r, t);
    long long compiled = evaluate_tiling(comp.rules, compile_tiling_to_pairs(comp, t));
    CHECK(orig == compiled);
    best_orig = std::min(best_orig, orig);
    best_compiled = std::min(best_compiled, compiled);
  }
  CHECK(best_orig == best_compiled);
}

TEST_CASE("pair compilation preserves the global minimum including inconsistent tilings") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    TileRuleSet r = random_rules(rng, 2, true);
    PairCompilation comp = compile_squares_to_pairs(r, 2);
    long long orig = plain_min(r, 2, 2);
    std::vector<int> interior(comp.rules.tile_count() - 1);
    std::iota(interior.begin(), interior.end(), 0);
    long long compiled = bordered_min(comp.rules, 2, 3, comp.border_tile, interior);
    CHECK(compiled == orig);
  }
}

// --- border gadget ---------------------------------------------------------------

TEST_CASE("canonical perimeter realises the full border benefit") {
  TileRuleSet r = abc_rules();
  BorderGadget g = border_cost_gadget(r);
  for (int n : {5, 7, 10}) {
    GridTiling t(n, n, 0);
    place_canonical_perimeter(g, t);
    CHECK(evaluate_tiling(r, t) == -4 * kBorderBenefit * (n - 1));
  }
}

TEST_CASE("border adjustment table") {
  CHECK(border_adjustment(0, SquareCorner::UpperLeft) == -kBorderBenefit);
  CHECK(border_adjustment(0, SquareCorner::LowerRight) == 2 * kBorderBenefit);
  CHECK(border_adjustment(1, SquareCorner::UpperRight) == -kBorderBenefit);
  CHECK(border_adjustment(1, SquareCorner::LowerLeft) == 2 * kBorderBenefit);
  CHECK(border_adjustment(2, SquareCorner::LowerRight) == -kBorderBenefit);
  CHECK(border_adjustment(2, SquareCorner::UpperLeft) == 2 * kBorderBenefit);
  CHECK(border_adjustment(3, SquareCorner::LowerLeft) == -kBorderBenefit);
  CHECK(border_adjustment(3, SquareCorner::UpperRight) == 2 * kBorderBenefit);
  CHECK(border_adjustment(0, SquareCorner::UpperRight) == 0);
}
