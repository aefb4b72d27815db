#include "ti/tiles.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace ti {

using nlohmann::json;

int TileRuleSet::find_tile(const std::string& name) const {
  for (int i = 0; i < tile_count(); ++i)
    if (tiles[i].name == name) return i;
  return -1;
}

long long TileRuleSet::max_abs_cost() const {
  long long m = 0;
  for (auto& [k, v] : horizontal) m = std::max(m, std::llabs(v));
  for (auto& [k, v] : vertical) m = std::max(m, std::llabs(v));
  for (auto& [k, v] : squares) m = std::max(m, std::llabs(v));
  return m;
}

long long evaluate_tiling(const TileRuleSet& rules, const GridTiling& t) {
  if (t.rows < 2 || t.cols < 2) fail(errc::dimension, "tiling must be at least 2x2");
  for (int c : t.cells) rules.check_tile(c);
  long long total = 0;
  for (int r = 0; r < t.rows; ++r)
    for (int c = 0; c + 1 < t.cols; ++c) total += rules.horizontal_cost(t.at(r, c), t.at(r, c + 1));
  for (int r = 0; r + 1 < t.rows; ++r)
    for (int c = 0; c < t.cols; ++c) total += rules.vertical_cost(t.at(r + 1, c), t.at(r, c));
  if (rules.has_squares()) {
    for (int r = 0; r + 1 < t.rows; ++r)
      for (int c = 0; c + 1 < t.cols; ++c)
        total += rules.square_cost(t.at(r + 1, c), t.at(r + 1, c + 1), t.at(r, c), t.at(r, c + 1));
  }
  return total;
}

PairCompilation compile_squares_to_pairs(const TileRuleSet& rules, int grid_n) {
  if (grid_n < 2) fail(errc::dimension, "grid size for penalty choice must be >= 2");
  PairCompilation out;
  int d = rules.tile_count();
  out.border_marker = d;  // sentinel for the border column inside a combined tile
  const int M = out.border_marker;

  auto component_name = [&](int a) { return a == M ? std::string("#") : rules.tiles[a].name; };
  auto add_combined = [&](int a, int b) {
    int id = out.rules.tile_count();
    out.rules.tiles.push_back({"[" + component_name(a) + "," + component_name(b) + "]", {}, false});
    out.combined_index[pair_key(uint32_t(a), uint32_t(b))] = id;
    return id;
  };

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) add_combined(a, b);
  for (int t = 0; t < d; ++t) {
    add_combined(M, t);
    add_combined(t, M);
  }
  out.border_tile = out.rules.tile_count();
  out.rules.tiles.push_back({"#", {}, true});
  out.rules.layer_count = rules.layer_count;

  // Penalty larger than any achievable consistent cost on the target grid.
  long long n = grid_n + 3;
  long long constraints = 2 * n * (n - 1) + (n - 1) * (n - 1);
  out.consistency_penalty = 1 + rules.max_abs_cost() * constraints;
  const long long P = out.consistency_penalty;

  auto right_comp = [&](uint64_t key) { return int(key & 0xffffffffULL); };
  auto left_comp = [&](uint64_t key) { return int(key >> 32); };
  auto orig_h = [&](int a, int b) { return (a == M || b == M) ? 0LL : rules.horizontal_cost(a, b); };
  auto orig_v = [&](int top, int bot) {
    return (top == M || bot == M) ? 0LL : rules.vertical_cost(top, bot);
  };
  auto orig_sq = [&](int nw, int ne, int sw, int se) {
    return (nw == M || ne == M || sw == M || se == M) ? 0LL : rules.square_cost(nw, ne, sw, se);
  };

  // Horizontal: consistency plus the left cell's internal pair.
  for (auto& [ka, ida] : out.combined_index) {
    int a = left_comp(ka), b = right_comp(ka);
    for (auto& [kb, idb] : out.combined_index) {
      int c = left_comp(kb);
      long long cost = orig_h(a, b);
      if (b != c) cost += P;
      out.rules.add_horizontal(ida, idb, cost);
    }
    // Row end: [t,M] must precede the border; anything else is inconsistent.
    out.rules.add_horizontal(ida, out.border_tile, orig_h(a, b) + (b == M ? 0 : P));
    // Row start: the border must be followed by [M,t].
    out.rules.add_horizontal(out.border_tile, ida, a == M ? 0 : P);
  }

  // Vertical: the original square plus the left component's vertical pair.
  for (auto& [ka, ida] : out.combined_index) {
    int a = left_comp(ka), b = right_comp(ka);
    for (auto& [kb, idb] : out.combined_index) {
      int c = left_comp(kb), e = right_comp(kb);
      out.rules.add_vertical(ida, idb, orig_sq(a, b, c, e) + orig_v(a, c));
    }
  }
  return out;
}

GridTiling compile_tiling_to_pairs(const PairCompilation& comp, const GridTiling& original) {
  const int M = comp.border_marker;
  GridTiling out(original.rows + 2, original.cols + 3, comp.border_tile);
  for (int r = 0; r < original.rows; ++r) {
    out.at(r + 1, 1) = comp.combined(M, original.at(r, 0));
    for (int c = 0; c + 1 < original.cols; ++c)
      out.at(r + 1, c + 2) = comp.combined(original.at(r, c), original.at(r, c + 1));
    out.at(r + 1, original.cols + 1) = comp.combined(original.at(r, original.cols - 1), M);
  }
  return out;
}

long long border_adjustment(int which, SquareCorner corner, long long benefit) {
  // which: 0=NW 1=NE 2=SE 3=SW
  static constexpr int kBenefitCorner[4] = {0, 1, 2, 3};   // UL, UR, LR, LL
  static constexpr int kPenaltyCorner[4] = {2, 3, 0, 1};   // LR, LL, UL, UR
  int c = int(corner);
  if (kBenefitCorner[which] == c) return -benefit;
  if (kPenaltyCorner[which] == c) return 2 * benefit;
  return 0;
}

BorderGadget border_cost_gadget(TileRuleSet& rules, long long benefit) {
  BorderGadget g;
  g.benefit = benefit;
  int base = rules.tile_count();
  const char* names[4] = {"#NW", "#NE", "#SE", "#SW"};
  for (int i = 0; i < 4; ++i) rules.tiles.push_back({names[i], {}, true});
  g.nw = base;
  g.ne = base + 1;
  g.se = base + 2;
  g.sw = base + 3;

  // Fold the corner adjustments into explicit square costs: every square
  // pattern containing a directed border tile picks up its table amount.
  int d = rules.tile_count();
  auto which = [&](int id) { return (id >= base && id < base + 4) ? id - base : -1; };
  for (int nw = 0; nw < d; ++nw)
    for (int ne = 0; ne < d; ++ne)
      for (int sw = 0; sw < d; ++sw)
        for (int se = 0; se < d; ++se) {
          long long adj = 0;
          if (which(nw) >= 0) adj += border_adjustment(which(nw), SquareCorner::UpperLeft, benefit);
          if (which(ne) >= 0) adj += border_adjustment(which(ne), SquareCorner::UpperRight, benefit);
          if (which(sw) >= 0) adj += border_adjustment(which(sw), SquareCorner::LowerLeft, benefit);
          if (which(se) >= 0) adj += border_adjustment(which(se), SquareCorner::LowerRight, benefit);
          if (adj != 0) rules.add_square(nw, ne, sw, se, adj);
        }
  return g;
}

void place_canonical_perimeter(const BorderGadget& g, GridTiling& t) {
  int R = t.rows, C = t.cols;
  for (int r = 0; r + 1 < R; ++r) t.at(r, 0) = g.sw;
  for (int c = 1; c < C; ++c) t.at(0, c) = g.se;
  for (int c = 0; c + 1 < C; ++c) t.at(R - 1, c) = g.nw;
  for (int r = 1; r < R; ++r) t.at(r, C - 1) = g.ne;
}

namespace {

json costs_to_json(const TileRuleSet& rules, const std::unordered_map<uint64_t, long long>& m) {
  std::vector<std::pair<uint64_t, long long>> sorted(m.begin(), m.end());
  std::sort(sorted.begin(), sorted.end());
  json arr = json::array();
  for (auto& [k, v] : sorted) {
    int a = int(k >> 32), b = int(k & 0xffffffffULL);
    arr.push_back({rules.tiles[a].name, rules.tiles[b].name, v});
  }
  return arr;
}

}  // namespace

std::string rules_to_json(const TileRuleSet& rules) {
  json j;
  j["layer_count"] = rules.layer_count;
  j["tiles"] = json::array();
  for (auto& t : rules.tiles) {
    json tj;
    tj["name"] = t.name;
    if (!t.layers.empty()) tj["layers"] = t.layers;
    if (t.border) tj["border"] = true;
    j["tiles"].push_back(tj);
  }
  j["horizontal"] = costs_to_json(rules, rules.horizontal);
  j["vertical"] = costs_to_json(rules, rules.vertical);
  std::vector<std::pair<uint64_t, long long>> sq(rules.squares.begin(), rules.squares.end());
  std::sort(sq.begin(), sq.end());
  json sqj = json::array();
  for (auto& [k, v] : sq) {
    int nw = int(k >> 48) & 0xffff, ne = int(k >> 32) & 0xffff;
    int sw = int(k >> 16) & 0xffff, se = int(k) & 0xffff;
    sqj.push_back({json::array({rules.tiles[nw].name, rules.tiles[ne].name, rules.tiles[sw].name,
                                rules.tiles[se].name}),
                   v});
  }
  j["squares"] = sqj;
  return j.dump(2);
}

TileRuleSet rules_from_json(const std::string& text) {
  json j = json::parse(text);
  TileRuleSet rules;
  rules.layer_count = j.value("layer_count", 1);
  for (auto& tj : j.at("tiles")) {
    TileInfo t;
    t.name = tj.at("name").get<std::string>();
    if (tj.contains("layers")) t.layers = tj["layers"].get<std::vector<int>>();
    t.border = tj.value("border", false);
    rules.tiles.push_back(t);
  }
  auto id = [&](const json& v) {
    int i = rules.find_tile(v.get<std::string>());
    if (i < 0) fail(errc::alphabet, "unknown tile name " + v.get<std::string>());
    return i;
  };
  for (auto& e : j.value("horizontal", json::array()))
    rules.add_horizontal(id(e[0]), id(e[1]), e[2].get<long long>());
  for (auto& e : j.value("vertical", json::array()))
    rules.add_vertical(id(e[0]), id(e[1]), e[2].get<long long>());
  for (auto& e : j.value("squares", json::array())) {
    auto& q = e[0];
    rules.add_square(id(q[0]), id(q[1]), id(q[2]), id(q[3]), e[1].get<long long>());
  }
  return rules;
}

std::string tiling_to_json(const TileRuleSet& rules, const GridTiling& t) {
  json j;
  if (t.rows == t.cols) j["n"] = t.rows;
  j["height"] = t.rows;
  j["width"] = t.cols;
  json rowsj = json::array();
  for (int r = 0; r < t.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < t.cols; ++c) row.push_back(rules.tiles[t.at(r, c)].name);
    rowsj.push_back(row);
  }
  j["rows"] = rowsj;  // listed bottom-up
  return j.dump(2);
}

GridTiling tiling_from_json(const TileRuleSet& rules, const std::string& text) {
  json j = json::parse(text);
  const json& rowsj = j.at("rows");
  int rows = j.contains("height") ? j["height"].get<int>()
             : j.contains("n")    ? j["n"].get<int>()
                                  : int(rowsj.size());
  int cols = j.contains("width") ? j["width"].get<int>() : int(rowsj.at(0).size());
  GridTiling t(rows, cols);
  if (int(rowsj.size()) != rows) fail(errc::io, "row count mismatch in tiling file");
  for (int r = 0; r < rows; ++r) {
    if (int(rowsj[r].size()) != cols) fail(errc::io, "column count mismatch in tiling file");
    for (int c = 0; c < cols; ++c) {
      int id = rules.find_tile(rowsj[r][c].get<std::string>());
      if (id < 0) fail(errc::alphabet, "unknown tile name in tiling file");
      t.at(r, c) = id;
    }
  }
  return t;
}

}  // namespace ti
