#pragma once

#include <string>
#include <vector>

#include "ti/layer1.hpp"
#include "ti/tm.hpp"

namespace ti::l2 {

// Tape symbol ids of the counter layer, in machine id order.
enum Sym : uint8_t { S = 0, D0 = 1, D1 = 2, B = 3, T = 4, X = 5, Blank = 6 };
enum State : uint8_t { QL = 0, QR = 1 };

// Two-state binary counter; T idles, X and # are wall columns. Runs top-down.
const TuringMachine& binary_counter_machine();

// Symbols a head may carry in this layer.
const std::vector<int>& counter_head_symbols();

// Steps until the counter tape reads x||1 with the head back on S, by the
// closed-form count and by direct simulation.
long long bctm_steps(const std::string& x);
long long bctm_steps_simulated(const std::string& x);

// Grid side for input x: the counter runs for exactly n-3 steps.
long long reduce_input(const std::string& x);

// One interior row of the counter layer; cells beyond the prefix are blank.
struct Row {
  std::vector<TmTile> cells;
  TmTile cell(int i) const { return i < int(cells.size()) ? cells[i] : tape_tile(Blank); }
  int prefix_len() const { return int(cells.size()); }
  bool operator==(const Row& o) const;
};

// Canonical translation of a Layer-1 row: heavy -> X, blank -> blank, and
// each interval interior resolved to (q_l/S) B* T / T / nothing by size.
Row translate_l1_to_l2(const l1::Row& top);

// Counts illegal translation/initialization squares for an arbitrary
// candidate first row against a Layer-1 row.
int translation_violations(const l1::Row& top, const Row& candidate, int width);

// Column-wise translation legality and the first-row pair graph (nullptr
// stands for a border column); building blocks of the square predicates.
bool translation_ok_column(const l1::Tile& from, const TmTile& to);
bool first_row_pair_ok(const TmTile* left, const TmTile* right);

struct StripRecord {
  int start = 0;
  int size = 0;
  long long tag = 0;
  bool clean = true;
  bool stuck = false;      // contains a (q/T) tile in the final row
  bool long_form = false;  // size >= 4 and not stuck
  std::string tape;        // final-row contents of the interval
};

struct Layer2Result {
  Row first_row;
  Row final_row;
  std::vector<Row> rows;  // all rows first..final when keep_rows
  std::vector<StripRecord> census;
};

// Runs every strip of `first` for n-3 steps. Tags/clean flags are taken from
// `l1_tags` (annotations of the Layer-1 row `first` was translated from) when
// provided, matched by interval position.
Layer2Result simulate_layer2(const Row& first, long long n,
                             const std::vector<l1::TaggedInterval>* l1_tags = nullptr,
                             bool keep_rows = false);

std::string census_to_json(const std::vector<StripRecord>& census);
std::string row_to_string(const Row& row);

}  // namespace ti::l2
