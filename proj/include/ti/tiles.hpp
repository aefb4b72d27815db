#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ti/common.hpp"

namespace ti {

// A tile type in an explicit rule set. Layer sub-ids are informational (used
// when a rule set is assembled from layered constructions); border tiles have
// none.
struct TileInfo {
  std::string name;
  std::vector<int> layers;
  bool border = false;
};

inline uint64_t pair_key(uint32_t a, uint32_t b) { return (uint64_t(a) << 32) | b; }

inline uint64_t square_key(uint32_t nw, uint32_t ne, uint32_t sw, uint32_t se) {
  return (uint64_t(nw) << 48) | (uint64_t(ne) << 32) | (uint64_t(sw) << 16) | se;
}

// Explicit translationally invariant rule set: a tile alphabet with integer
// costs on horizontal pairs, vertical pairs, and 2x2 squares (NW,NE,SW,SE).
// Missing entries cost 0; illegality is expressed as a positive cost.
struct TileRuleSet {
  std::vector<TileInfo> tiles;
  int layer_count = 1;
  std::unordered_map<uint64_t, long long> horizontal;  // key pair_key(left, right)
  std::unordered_map<uint64_t, long long> vertical;    // key pair_key(top, bottom)
  std::unordered_map<uint64_t, long long> squares;     // key square_key(nw,ne,sw,se)

  int tile_count() const { return int(tiles.size()); }
  int find_tile(const std::string& name) const;

  long long horizontal_cost(int left, int right) const {
    auto it = horizontal.find(pair_key(left, right));
    return it == horizontal.end() ? 0 : it->second;
  }
  long long vertical_cost(int top, int bottom) const {
    auto it = vertical.find(pair_key(top, bottom));
    return it == vertical.end() ? 0 : it->second;
  }
  long long square_cost(int nw, int ne, int sw, int se) const {
    if (squares.empty()) return 0;
    auto it = squares.find(square_key(nw, ne, sw, se));
    return it == squares.end() ? 0 : it->second;
  }
  bool has_squares() const { return !squares.empty(); }

  void add_horizontal(int left, int right, long long c) {
    if (c != 0) horizontal[pair_key(left, right)] += c;
  }
  void add_vertical(int top, int bottom, long long c) {
    if (c != 0) vertical[pair_key(top, bottom)] += c;
  }
  void add_square(int nw, int ne, int sw, int se, long long c) {
    if (c != 0) squares[square_key(nw, ne, sw, se)] += c;
  }

  long long max_abs_cost() const;
  void check_tile(int id) const {
    if (id < 0 || id >= tile_count()) fail(errc::alphabet, "tile id out of range");
  }
};

// Rectangular tiling. Row 0 is the bottom row.
struct GridTiling {
  int rows = 0;
  int cols = 0;
  std::vector<int> cells;  // row-major from the bottom

  GridTiling() = default;
  GridTiling(int r, int c, int fill = 0) : rows(r), cols(c), cells(size_t(r) * c, fill) {}

  int& at(int row, int col) { return cells[size_t(row) * cols + col]; }
  int at(int row, int col) const { return cells[size_t(row) * cols + col]; }
};

// Total cost: all horizontal pairs + all vertical pairs + all 2x2 squares.
long long evaluate_tiling(const TileRuleSet& rules, const GridTiling& tiling);

// Square->pair lowering. The output alphabet consists of combined tiles
// [a,b] for adjacent columns of the original grid (border tiles combine with
// interior neighbours at the two ends of a row), plus pass-through border
// tiles. Any horizontally adjacent combined tiles that disagree on the shared
// column pay `consistency_penalty`; consistent tilings of the widened grid
// reproduce the original cost exactly.
struct PairCompilation {
  TileRuleSet rules;
  long long consistency_penalty = 0;
  int border_tile = -1;                              // pass-through border id in the output
  std::unordered_map<uint64_t, int> combined_index;  // pair_key(a,b) -> output id, a or b may be border_marker
  int border_marker = -1;                            // id used for the border column inside a combined tile

  int combined(int a, int b) const {
    auto it = combined_index.find(pair_key(uint32_t(a), uint32_t(b)));
    if (it == combined_index.end()) fail(errc::alphabet, "no such combined tile");
    return it->second;
  }
};

// `grid_n` is the side of the original grid the compilation will be evaluated
// against; it only enters the penalty choice (one more than the largest single
// constraint cost times the number of constraints on that grid).
PairCompilation compile_squares_to_pairs(const TileRuleSet& rules, int grid_n = 8);

// Maps an original R x C interior tiling to the corresponding consistent
// compiled tiling: an (R+2) x (C+3) grid whose ring is the pass-through
// border tile and whose interior rows read [M,t_1][t_1,t_2]...[t_C,M].
GridTiling compile_tiling_to_pairs(const PairCompilation& comp, const GridTiling& original);

// JSON round trip for rule files and tiling files.
std::string rules_to_json(const TileRuleSet& rules);
TileRuleSet rules_from_json(const std::string& text);
std::string tiling_to_json(const TileRuleSet& rules, const GridTiling& tiling);
GridTiling tiling_from_json(const TileRuleSet& rules, const std::string& text);

// The four directed border tile types and their square-cost adjustments.
// `border_cost_gadget` appends NW/NE/SE/SW variants of a border tile to an
// explicit rule set and folds the +-C corner adjustments into square costs.
inline constexpr long long kBorderBenefit = 21;

struct BorderGadget {
  int nw = -1, ne = -1, se = -1, sw = -1;
  long long benefit = kBorderBenefit;

  bool is_border(int id) const { return id == nw || id == ne || id == se || id == sw; }
};

// Positions within a square for adjustment accounting.
enum class SquareCorner { UpperLeft, UpperRight, LowerRight, LowerLeft };

// Adjustment contributed by placing border tile `which` (0=NW,1=NE,2=SE,3=SW)
// at a given corner of a square; 0 if none.
long long border_adjustment(int which, SquareCorner corner, long long benefit = kBorderBenefit);

BorderGadget border_cost_gadget(TileRuleSet& rules, long long benefit = kBorderBenefit);

// Fills the perimeter of `t` with the canonical border assignment (SW on the
// left edge and SW corner, SE on the bottom edge and SE corner, NW on the top
// edge and NW corner, NE on the right edge and NE corner), which realises the
// full -4*C*(n-1) benefit.
void place_canonical_perimeter(const BorderGadget& g, GridTiling& t);

}  // namespace ti
