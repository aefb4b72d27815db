#include <set>

#include "doctest.h"
#include "ti/common.hpp"
#include "ti/layer1.hpp"

using namespace ti;
using namespace ti::l1;

namespace {

Row make_row(std::initializer_list<Tile> tiles) {
  Row r;
  r.cells = tiles;
  return r;
}

// Recolors a symbol row so everything left of the head is blue and
// everything right of it is red.
Row with_side_colors(std::vector<Tile> cells) {
  int head = -1;
  for (int i = 0; i < int(cells.size()); ++i)
    if (cells[i].is_head()) head = i;
  for (int i = 0; i < int(cells.size()); ++i)
    if (!cells[i].is_head() && colorable(cells[i].sym))
      cells[i].color = i < head ? Blue : Red;
  Row r;
  r.cells = std::move(cells);
  return r;
}

}  // namespace

TEST_CASE("transition table spot checks") {
  auto r1 = layer1_delta(IS, X);
  REQUIRE(r1.has_value());
  CHECK(r1->next_state == WXbar);
  CHECK(r1->write == B);
  CHECK(r1->move == Move::Right);

  auto r2 = layer1_delta(E1, Blank);
  REQUIRE(r2.has_value());
  CHECK(r2->next_state == E2);
  CHECK(r2->write == X);
  CHECK(r2->move == Move::Right);

  CHECK_FALSE(layer1_delta(WR, X).has_value());
  CHECK_FALSE(layer1_delta(OS, Blank).has_value());
  CHECK(layer1_machine().direction_unique());
}

TEST_CASE("initial row and the first step") {
  Row r1 = initial_row();
  CHECK(is_valid_row(r1, 16));
  CHECK(is_end_row(r1, 16));
  Row r2 = next_row(r1, 16);
  CHECK(r2 == make_row({head(OS, LEnd), tape(REnd)}));
  CHECK(is_valid_row(r2, 16));
}

TEST_CASE("valid rows require exactly one head") {
  Row no_head = with_side_colors({tape(LEnd), tape(B), tape(REnd)});
  CHECK_FALSE(is_valid_row(no_head, 16));

  Row good = with_side_colors({tape(LEnd), tape(B), head(IS, B), tape(B), tape(REnd)});
  CHECK(is_valid_row(good, 16));

  // A blue B to the right of the head is invalid.
  Row bad = good;
  bad.cells[3].color = Blue;
  CHECK_FALSE(is_valid_row(bad, 16));
  int col = -2;
  is_valid_row(bad, 16, &col);
  CHECK(col >= 2);
}

TEST_CASE("head-on-blank rows are valid only in the wind-down states") {
  Row e1 = with_side_colors({tape(LEnd), tape(B, Blue), tape(X, Blue), head(E1, Blank)});
  CHECK(is_valid_row(e1, 16));
  Row is_on_blank = with_side_colors({tape(LEnd), tape(B), tape(X), head(IS, Blank)});
  CHECK_FALSE(is_valid_row(is_on_blank, 16));
}

TEST_CASE("next_row follows the machine and keeps validity") {
  int width = 30;
  Row r = initial_row();
  for (int step = 0; step < 200; ++step) {
    Row next = next_row(r, width);
    CHECK(is_valid_row(next, width));
    int heads = 0;
    for (const Tile& t : next.cells) heads += t.is_head();
    CHECK(heads == 1);
    r = next;
  }
}

TEST_CASE("simulation matches the generic machine step by step") {
  const TuringMachine& tm = layer1_machine();
  TmConfiguration cfg;
  cfg.tape = {LEnd, Blank};
  cfg.head = 1;
  cfg.state = E2;
  Row row = initial_row();
  int width = 64;
  for (int step = 0; step < 400; ++step) {
    auto next_cfg = tm_step(tm, cfg);
    REQUIRE(next_cfg.has_value());
    cfg = *next_cfg;
    row = next_row(row, width);
    for (int i = 0; i < width; ++i) {
      Tile t = row.cell(i);
      int expect = cfg.symbol_at(tm, i);
      CHECK(int(t.sym) == expect);
      CHECK(t.is_head() == (cfg.head == i));
      if (t.is_head()) CHECK(int(t.state) == cfg.state);
    }
  }
}

TEST_CASE("small grids") {
  // n=5: rows r_1..r_3; the last row has one interval of size 2.
  auto rows = simulate_layer1(5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2] == make_row({tape(LEnd), head(IS, REnd)}));
  CHECK(interval_sizes(rows[2]) == std::vector<long long>{2});
}

TEST_CASE("end rows and interval growth on a 16 grid") {
  auto rows = simulate_layer1(16);
  REQUIRE(rows.size() == 14);
  std::vector<int> end_rows;
  for (int t = 1; t <= 14; ++t)
    if (is_end_row(rows[t - 1], 14)) end_rows.push_back(t);
  CHECK(end_rows == std::vector<int>{1, 5});
  CHECK(interval_sizes(rows[4]) == std::vector<long long>{3, 2});
  CHECK(interval_sizes(rows[13]) == std::vector<long long>{4, 2});
  CHECK(mu(16) == 2);
}

TEST_CASE("the fourth completed loop matches the published example shape") {
  long long e4 = end_row_index(4);
  CHECK(e4 == 40);
  auto rows = simulate_layer1(int(e4) + 3);
  const Row& end = rows[size_t(e4) - 1];
  CHECK(is_end_row(end, int(e4)));
  CHECK(interval_sizes(end) == std::vector<long long>{5, 4, 3, 2});
  // One step later the right end marker is restored.
  const Row& after = rows[size_t(e4)];
  std::vector<uint8_t> syms;
  for (const Tile& t : after.cells) syms.push_back(t.sym);
  CHECK(syms == std::vector<uint8_t>{LEnd, B, B, B, X, B, B, X, B, X, REnd});
}

TEST_CASE("interval extraction") {
  Row r = with_side_colors({tape(LEnd), tape(B), tape(B), tape(X), tape(B), head(IS, REnd)});
  CHECK(interval_sizes(r) == std::vector<long long>{4, 3});

  // A weight-2 tile forms a one-tile interval shared with its neighbours.
  Row r2 = with_side_colors({tape(LEnd), tape(B), head(WX, X), tape(B), tape(REnd)});
  auto ivs = intervals(r2);
  REQUIRE(ivs.size() == 3);
  CHECK(ivs[1].start == ivs[1].end);
  CHECK(interval_sizes(r2) == std::vector<long long>{3, 1, 3});
}

TEST_CASE("interval count equals row weight minus one on random rows") {
  SplitMix64 rng(31);
  std::vector<Tile> pool;
  pool.push_back(tape(LEnd));
  pool.push_back(tape(REnd));
  pool.push_back(tape(Blank));
  for (auto s : {X, B, Xbar}) {
    pool.push_back(tape(s, Blue));
    pool.push_back(tape(s, Red));
  }
  for (int q = 0; q < 9; ++q)
    for (int s = 0; s < 6; ++s) pool.push_back(head(State(q), Sym(s)));
  for (int trial = 0; trial < 1000; ++trial) {
    Row r;
    int len = 1 + int(rng.below(20));
    for (int i = 0; i < len; ++i) r.cells.push_back(pool[rng.below(pool.size())]);
    int w = row_weight(r);
    if (w < 1) continue;
    CHECK(int(intervals(r).size()) == w - 1);
  }
}

TEST_CASE("X values") {
  std::vector<long long> one{2};
  CHECK(x_of_sizes(one) == 3);
  std::vector<long long> two{3, 2};
  CHECK(x_of_sizes(two) == 10);
  std::vector<long long> four{5, 4, 3, 2};
  CHECK(x_of_sizes(four) == 44);
}

TEST_CASE("A values") {
  std::vector<long long> ideal{5, 4, 3, 2};
  CHECK(a_value(ideal) == 0);
  std::vector<long long> s2{4, 4, 2};
  CHECK(a_value(s2) == 2);
  std::vector<long long> s3{3, 3, 3};
  CHECK(a_value(s3) == 3);
  CHECK(a_value(std::vector<long long>{}) == 0);
}

TEST_CASE("closed-form mu matches simulation") {
  auto rows = simulate_layer1(400);
  for (int n = 5; n <= 400; ++n) {
    long long simulated = interval_sizes(rows[size_t(n) - 3]).size();
    CHECK(mu(n) == simulated);
  }
}

TEST_CASE("end-row cadence: spans are X plus the restart step") {
  auto rows = simulate_layer1(420);
  std::vector<int> ends;
  for (int t = 1; t <= int(rows.size()); ++t)
    if (is_end_row(rows[t - 1], 418)) ends.push_back(t);
  REQUIRE(ends.size() >= 5);
  for (size_t i = 0; i + 1 < ends.size(); ++i) {
    long long span = ends[i + 1] - ends[i];
    CHECK(span == x_value(rows[ends[i] - 1]) + 1);
    CHECK(end_row_index((long long)i + 2) == ends[i + 1]);
  }
}

TEST_CASE("clean tagging on a fault-free run") {
  int n = 42;
  auto rows = simulate_layer1(n);
  auto tags = tag_clean_corrupt(rows, n - 2);
  // Row 1 has the single clean interval with tag 1.
  REQUIRE(tags[0].size() == 1);
  CHECK(tags[0][0].clean);
  CHECK(tags[0][0].tag == 1);
  // Every interval in every row is clean; tags are unique and persistent.
  std::set<long long> final_tags;
  for (size_t i = 0; i < tags.size(); ++i) {
    std::set<long long> seen;
    for (const auto& iv : tags[i]) {
      CHECK(iv.clean);
      CHECK(iv.tag <= (long long)i + 1);
      CHECK(!seen.count(iv.tag));
      seen.insert(iv.tag);
    }
  }
  for (const auto& iv : tags.back()) final_tags.insert(iv.tag);
  CHECK((long long)final_tags.size() == mu(n));
  // New tags appear exactly at end rows.
  std::set<long long> expected{1};
  for (long long m = 2; end_row_index(m) <= n - 2; ++m) expected.insert(end_row_index(m));
  CHECK(final_tags == expected);
}

TEST_CASE("segments on a fault-free run count the completed loops") {
  int n = 16;
  auto rows = simulate_layer1(n);
  std::vector<int> costs(n - 1, 0);
  std::vector<char> flags(n - 1, 0);
  for (int t = 1; t <= n - 2; ++t) flags[t] = is_end_row(rows[t - 1], n - 2);
  auto segs = segment_decomposition(costs, flags);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].first_row == 0);
  CHECK(segs[0].last_row == 1);
  CHECK(segs[0].complete);
  CHECK(segs[1].last_row == 5);
  CHECK(segs[1].complete);
  CHECK(segs[2].last_row == 14);
  CHECK_FALSE(segs[2].complete);  // the top segment stops mid-loop
  int complete = 0;
  for (auto& s : segs) complete += s.complete;
  CHECK(complete == mu(n));
}

TEST_CASE("row costs are zero on the fault-free tiling") {
  int n = 24;
  auto rows = simulate_layer1(n);
  CHECK(init_v(rows[0], n - 2) == 0);
  for (int t = 1; t <= n - 2; ++t) {
    CHECK(row_h(rows[t - 1], n - 2) == 0);
    if (t < n - 2) CHECK(squares_v(rows[t - 1], rows[t], n - 2) == 0);
  }
}

TEST_CASE("a flipped tape tile is caught by the squares above and below") {
  int n = 24;
  auto rows = simulate_layer1(n);
  int t = 12;
  Row& r = rows[t - 1];
  int col = -1;
  for (int i = 1; i < r.prefix_len(); ++i)
    if (!r.cells[i].is_head() && r.cells[i].sym == B) col = i;
  REQUIRE(col >= 0);
  r.cells[col] = tape(X, Color(r.cells[col].color));
  CHECK(squares_v(rows[t - 2], rows[t - 1], n - 2) >= 1);
  CHECK(squares_v(rows[t - 1], rows[t], n - 2) >= 1);
}

TEST_CASE("colored square legality around a moving head") {
  // Left move of q_left over B with an X behind it.
  CHECK(legal_square(tape(X, Blue), head(SLeft, B), head(SLeft, X), tape(B, Red)));
  CHECK_FALSE(legal_square(tape(X, Red), head(SLeft, B), head(SLeft, X), tape(B, Red)));
  CHECK_FALSE(legal_square(tape(X, Blue), head(SLeft, B), head(SLeft, X), tape(B, Blue)));
  // A tape tile must copy its color upward.
  CHECK(legal_square(tape(B, Red), tape(Blank), tape(B, Red), tape(Blank)));
  CHECK_FALSE(legal_square(tape(B, Red), tape(Blank), tape(B, Blue), tape(Blank)));
}

TEST_CASE("weight and length never decrease along fault-free steps") {
  int n = 100;
  auto rows = simulate_layer1(n);
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(row_weight(rows[i + 1]) >= row_weight(rows[i]));
    CHECK(row_length(rows[i + 1]) >= row_length(rows[i]));
    if (row_weight(rows[i + 1]) > row_weight(rows[i])) {
      // Weight grows only by the step that closes an iteration.
      CHECK(is_end_row(rows[i + 1], n - 2));
    }
  }
}

TEST_CASE("row text round trip") {
  Row r2 = with_side_colors({tape(LEnd), tape(B), head(WX, X), tape(B), tape(REnd)});
  std::string s = row_to_string(r2);
  Row parsed;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t sp = s.find(' ', pos);
    if (sp == std::string::npos) sp = s.size();
    auto t = tile_from_name(s.substr(pos, sp - pos));
    REQUIRE(t.has_value());
    parsed.cells.push_back(*t);
    pos = sp + 1;
  }
  CHECK(parsed == r2);
}
