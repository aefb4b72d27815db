#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ti/tm.hpp"

namespace ti::l1 {

// Tape symbols, in machine id order.
enum Sym : uint8_t { LEnd = 0, X = 1, B = 2, Xbar = 3, REnd = 4, Blank = 5 };
enum Color : uint8_t { NoColor = 0, Blue = 1, Red = 2 };
enum State : uint8_t { OS = 0, SLeft = 1, IS = 2, WXbar = 3, WX = 4, WB = 5, WR = 6, E1 = 7, E2 = 8 };

inline constexpr uint8_t kNoState = 0xff;

struct Tile {
  uint8_t sym = Sym::Blank;
  uint8_t color = NoColor;
  uint8_t state = kNoState;  // kNoState for tape tiles

  bool is_head() const { return state != kNoState; }
  bool operator==(const Tile&) const = default;
};

inline Tile tape(Sym s, Color c = NoColor) { return Tile{uint8_t(s), uint8_t(c), kNoState}; }
inline Tile head(State q, Sym s) { return Tile{uint8_t(s), NoColor, uint8_t(q)}; }
inline bool colorable(uint8_t sym) { return sym == X || sym == B || sym == Xbar; }

// 0/1 weights of symbols and states; a tile of positive weight is heavy.
int sym_weight(uint8_t sym);
int state_weight(uint8_t state);
int tile_weight(const Tile& t);

// One row of the interior of the grid; cells beyond the stored prefix are
// blank tape tiles. The stored prefix always covers the head and every
// non-blank tile.
struct Row {
  std::vector<Tile> cells;

  Tile cell(int i) const { return i < int(cells.size()) ? cells[i] : tape(Blank); }
  int prefix_len() const { return int(cells.size()); }
  void trim();
  bool operator==(const Row& o) const;
};

// The exact machine: states q_OS, q_left, q_IS, q_wX., q_wX, q_wB, q_w>,
// q_e1, q_e2 over the six tape symbols, with the 0/1 weight tables.
const TuringMachine& layer1_machine();

// Transition lookup in enum ids; nullopt where the table has no rule.
std::optional<TmOutcome> layer1_delta(uint8_t state, uint8_t sym);

// --- horizontal rules -----------------------------------------------------

// Legal-pair test; `left_border`/`right_border` stand for the grid border.
bool legal_pair(const Tile& left, const Tile& right);
bool legal_pair_border_left(const Tile& right);
bool legal_pair_border_right(const Tile& left);

// Number of illegal pairs in the framed row (interior width `width`).
int row_h(const Row& row, int width);

// True iff the framed row has no illegal pair; on failure reports the column
// of the first violating pair (-1 for the pair with the left border).
bool is_valid_row(const Row& row, int width, int* first_violation = nullptr);

// --- vertical rules ---------------------------------------------------------

// Illegal computation squares spanning `lower` and `upper` (interior width
// `width`), including the wall squares at the two borders.
int squares_v(const Row& lower, const Row& upper, int width);

// Illegal initialization squares below row r_1.
int init_v(const Row& first_row, int width);

// Initialization pair legality above two bottom-border tiles; nullopt stands
// for the grid border column.
bool init_pair_ok(std::optional<Tile> left, std::optional<Tile> right);

// Whether the four tiles form a legal computation square; border columns are
// passed as nullopt.
bool legal_square(std::optional<Tile> bl, std::optional<Tile> br, std::optional<Tile> tl,
                  std::optional<Tile> tr);

// --- dynamics ---------------------------------------------------------------

int head_position(const Row& row);  // -1 when no head tile

// Unique fault-free successor of a valid row.
Row next_row(const Row& row, int width);

// Deterministic local continuation of an arbitrary row: tape tiles copy
// upward, every head with an applicable rule steps, stuck heads stay.
Row continue_row(const Row& row, int width);

// Row r_1.
Row initial_row();

// True for rows of the end-configuration form (left end, colored middle,
// head (q_e2/#)) that are also valid.
bool is_end_row(const Row& row, int width);

// Rows r_1 .. r_{n-2} of the unique fault-free tiling.
std::vector<Row> simulate_layer1(int n);

// --- intervals and measures -------------------------------------------------

struct Interval {
  int start = 0;
  int end = 0;  // inclusive; start == end for a weight-2 tile
  int size() const { return end - start + 1; }
};

std::vector<Interval> intervals(const Row& row);
std::vector<long long> interval_sizes(const Row& row);

int row_weight(const Row& row);   // sum of tile weights
int row_length(const Row& row);   // number of non-blank tiles

long long x_of_sizes(std::span<const long long> sizes);
long long x_value(const Row& row);

long long a_value(std::span<const long long> sizes);

// Closed form: the number of intervals in the last row of the fault-free
// tiling of an n x n grid. f_outer(m) is the total number of steps consumed
// by the first m-1 complete loop iterations, so end rows sit at index
// m + f_outer(m).
long long f_outer(long long m);
long long mu(long long n);
long long end_row_index(long long m);

// --- clean/corrupt tracking ---------------------------------------------------

struct TaggedInterval {
  int start = 0;
  int end = 0;
  bool clean = false;
  long long tag = 0;  // meaningful iff clean
  int size() const { return end - start + 1; }
};

// Per-row interval annotations for rows r_1..r_top (input rows[0] is r_1).
std::vector<std::vector<TaggedInterval>> tag_clean_corrupt(const std::vector<Row>& rows, int width);

// --- segments ---------------------------------------------------------------

struct Segment {
  int first_row = 0;
  int last_row = 0;
  bool complete = false;
};

// costs[t] = h(r_t) + v(r_t) for t = 0..top; end_row[t] marks valid end rows.
std::vector<Segment> segment_decomposition(const std::vector<int>& costs,
                                           const std::vector<char>& end_row);

// --- text -----------------------------------------------------------------

std::string tile_name(const Tile& t);
std::string row_to_string(const Row& row);
std::optional<Tile> tile_from_name(const std::string& name);

}  // namespace ti::l1
