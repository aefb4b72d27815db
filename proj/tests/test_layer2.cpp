#include <cmath>

#include "doctest.h"
#include "ti/layer1.hpp"
#include "ti/layer2.hpp"

using namespace ti;
using namespace ti::l2;

TEST_CASE("counter rule spot checks") {
  const TuringMachine& m = binary_counter_machine();
  auto r = m.delta[QR][D1];
  REQUIRE(r.has_value());
  CHECK(r->write == D0);
  CHECK(r->next_state == QR);
  CHECK(r->move == Move::Right);
  CHECK(m.delta[QL][T].has_value());
  CHECK(m.delta[QL][T]->move == Move::Stay);
  CHECK(m.direction == TmDirection::Down);
}

TEST_CASE("two steps from the start write the first 1") {
  const TuringMachine& m = binary_counter_machine();
  TmConfiguration cfg{{S, B, B}, 0, QL};
  cfg = *tm_step(m, cfg);
  cfg = *tm_step(m, cfg);
  CHECK(cfg.state == QL);
  CHECK(cfg.head == 0);
  CHECK(cfg.tape[1] == D1);
}

TEST_CASE("two steps turn 01 into 11") {
  const TuringMachine& m = binary_counter_machine();
  TmConfiguration cfg{{S, D0, D1}, 0, QL};
  cfg = *tm_step(m, cfg);
  cfg = *tm_step(m, cfg);
  CHECK(cfg.state == QL);
  CHECK(cfg.head == 0);
  CHECK(cfg.tape[1] == D1);
  CHECK(cfg.tape[2] == D1);
}

TEST_CASE("step count formula") {
  CHECK(bctm_steps("") == 2);
  CHECK(bctm_steps("0") == 6);
  CHECK(bctm_steps("1") == 8);
  CHECK(bctm_steps_simulated("") == 2);
  CHECK(bctm_steps_simulated("0") == 6);
  CHECK(bctm_steps_simulated("1") == 8);
  for (int len = 1; len <= 8; ++len)
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::string x;
      for (int i = 0; i < len; ++i) x += (bits >> i) & 1 ? '1' : '0';
      CHECK(bctm_steps(x) == bctm_steps_simulated(x));
    }
}

TEST_CASE("reduction values") {
  CHECK(reduce_input("1") == 11);
  CHECK(reduce_input("0") == 9);
  CHECK_THROWS(reduce_input(""));
  CHECK_THROWS(reduce_input("12"));
}

TEST_CASE("translation of the final interval row") {
  // A size-5, size-4, size-3, size-2 interval chain.
  l1::Row top;
  top.cells = {l1::tape(l1::LEnd),      l1::tape(l1::B, l1::Blue), l1::tape(l1::B, l1::Blue),
               l1::tape(l1::B, l1::Blue), l1::tape(l1::X, l1::Blue), l1::tape(l1::B, l1::Blue),
               l1::tape(l1::B, l1::Blue), l1::tape(l1::X, l1::Blue), l1::tape(l1::B, l1::Blue),
               l1::tape(l1::X, l1::Blue), l1::head(l1::E2, l1::Blank)};
  Row out = translate_l1_to_l2(top);
  // size 5 -> X S B T X; size 4 -> X S T X (already covered by overlap);
  REQUIRE(out.prefix_len() == 11);
  CHECK(out.cells[0] == tape_tile(X));
  CHECK(out.cells[1] == head_tile(QL, S));
  CHECK(out.cells[2] == tape_tile(B));
  CHECK(out.cells[3] == tape_tile(T));
  CHECK(out.cells[4] == tape_tile(X));
  CHECK(out.cells[5] == head_tile(QL, S));
  CHECK(out.cells[6] == tape_tile(T));
  CHECK(out.cells[7] == tape_tile(X));
  CHECK(out.cells[8] == tape_tile(T));  // size-3 interval
  CHECK(out.cells[9] == tape_tile(X));
  CHECK(out.cells[10] == tape_tile(X));  // size-2 interval
  CHECK(translation_violations(top, out, 32) == 0);

  Row bad = out;
  bad.cells[2] = tape_tile(X);
  CHECK(translation_violations(top, bad, 32) > 0);
}

TEST_CASE("a weight-2 tile collapses to a single wall column") {
  l1::Row top;
  top.cells = {l1::tape(l1::LEnd), l1::tape(l1::B, l1::Blue), l1::head(l1::WX, l1::X),
               l1::tape(l1::B, l1::Red), l1::tape(l1::REnd)};
  Row out = translate_l1_to_l2(top);
  CHECK(out.cells[2] == tape_tile(X));
  CHECK(translation_violations(top, out, 16) == 0);
}

TEST_CASE("a wide strip computes the reduction input") {
  for (std::string x : {"1", "0", "101", "1101"}) {
    long long n = reduce_input(x);
    int needed = int(x.size()) + 4;
    int interior = std::max<int>(needed, int(std::log2(double(n))) + 4);
    Row first;
    first.cells.push_back(tape_tile(X));
    first.cells.push_back(head_tile(QL, S));
    for (int i = 1; i < interior - 1; ++i) first.cells.push_back(tape_tile(B));
    first.cells.push_back(tape_tile(T));
    first.cells.push_back(tape_tile(X));
    auto res = simulate_layer2(first, n);
    REQUIRE(res.census.size() == 1);
    CHECK(res.census[0].long_form);
    // Final strip contents: S then x||1 then blanks.
    std::string want = x + "1";
    CHECK(res.final_row.cells[1] == head_tile(QL, S));
    for (size_t i = 0; i < want.size(); ++i)
      CHECK(res.final_row.cells[2 + i] == tape_tile(want[i] == '1' ? D1 : D0));
    CHECK(res.final_row.cells[2 + want.size()] == tape_tile(B));
  }
}

TEST_CASE("a width-4 strip gets stuck on the wall at zero cost") {
  Row first;
  first.cells = {tape_tile(X), head_tile(QL, S), tape_tile(B), tape_tile(T), tape_tile(X)};
  auto res = simulate_layer2(first, 4001);
  REQUIRE(res.census.size() == 1);
  CHECK(res.census[0].stuck);
  CHECK_FALSE(res.census[0].long_form);
}

TEST_CASE("full pipeline: layer-2 strips inherit the layer-1 intervals") {
  for (int n : {16, 40, 64}) {
    auto l1rows = l1::simulate_layer1(n);
    auto tags = l1::tag_clean_corrupt(l1rows, n - 2);
    Row first = translate_l1_to_l2(l1rows.back());
    auto res = simulate_layer2(first, n, &tags.back());
    // Clean strips match the layer-1 clean intervals of size >= 2.
    int expected = 0;
    for (const auto& iv : tags.back())
      if (iv.clean && iv.size() >= 2) ++expected;
    int got = 0;
    for (const auto& rec : res.census) got += rec.clean;
    CHECK(got == expected);
    // Strip walls are vertical: sizes in the census match the intervals.
    size_t k = 0;
    for (const auto& iv : tags.back()) {
      if (iv.size() < 2) continue;
      REQUIRE(k < res.census.size());
      CHECK(res.census[k].size == iv.size());
      CHECK(res.census[k].start == iv.start);
      ++k;
    }
    // Digit runs in the final row stay short (no faults anywhere).
    int run = 0, longest = 0;
    for (int i = 0; i < res.final_row.prefix_len(); ++i) {
      TmTile t = res.final_row.cell(i);
      bool digit = !t.is_head() && (t.sym == D0 || t.sym == D1);
      run = digit ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    CHECK(longest <= int(std::log2(double(n))) + 3);
  }
}

TEST_CASE("strip walls are vertical in a fault-free layer-2 tiling") {
  int n = 16;
  auto l1rows = l1::simulate_layer1(n);
  Row first = translate_l1_to_l2(l1rows.back());
  auto res = simulate_layer2(first, n, nullptr, true);
  std::vector<int> walls;
  for (int i = 0; i < first.prefix_len(); ++i)
    if (first.cells[i] == tape_tile(X)) walls.push_back(i);
  REQUIRE(res.rows.size() == size_t(n - 2));
  for (const Row& row : res.rows) {
    std::vector<int> here;
    for (int i = 0; i < row.prefix_len(); ++i)
      if (row.cell(i) == tape_tile(X)) here.push_back(i);
    CHECK(here == walls);
  }
}

TEST_CASE("census serialises to json") {
  Row first;
  first.cells = {tape_tile(X), head_tile(QL, S), tape_tile(B), tape_tile(T), tape_tile(X)};
  auto res = simulate_layer2(first, 101);
  std::string json = census_to_json(res.census);
  CHECK(json.find("\"form\"") != std::string::npos);
}
