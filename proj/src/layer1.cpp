#include "ti/layer1.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace ti::l1 {

int sym_weight(uint8_t sym) {
  switch (sym) {
    case LEnd:
    case X:
    case Xbar:
    case REnd:
      return 1;
    default:
      return 0;
  }
}

int state_weight(uint8_t state) {
  switch (state) {
    case WX:
    case WXbar:
    case WR:
    case E1:
    case E2:
      return 1;
    default:
      return 0;
  }
}

int tile_weight(const Tile& t) {
  return t.is_head() ? sym_weight(t.sym) + state_weight(t.state) : sym_weight(t.sym);
}

void Row::trim() {
  while (!cells.empty()) {
    const Tile& t = cells.back();
    if (!t.is_head() && t.sym == Blank) {
      cells.pop_back();
    } else {
      break;
    }
  }
}

bool Row::operator==(const Row& o) const {
  int m = std::max(prefix_len(), o.prefix_len());
  for (int i = 0; i < m; ++i)
    if (!(cell(i) == o.cell(i))) return false;
  return true;
}

const TuringMachine& layer1_machine() {
  static const TuringMachine tm = [] {
    TuringMachine m;
    for (const char* s : {"q_OS", "q_left", "q_IS", "q_wX\xCC\x84", "q_wX", "q_wB",
                          "q_w\xE2\x8A\xB3", "q_e1", "q_e2"})
      m.add_state(s);
    for (const char* a : {"\xE2\x8A\xB2", "X", "B", "X\xCC\x84", "\xE2\x8A\xB3", "#"})
      m.add_symbol(a);
    m.blank = Blank;
    m.direction = TmDirection::Up;
    m.symbol_weight = {1, 1, 0, 1, 1, 0};
    m.state_weight = {0, 0, 0, 1, 1, 0, 1, 1, 1};

    auto rule = [&](State q, Sym c, State q2, Sym w, Move mv) { m.set_rule(q, c, q2, w, mv); };
    // Outer loop set-up: sweep left to the left end, then start the inner loop.
    rule(OS, LEnd, IS, LEnd, Move::Right);
    rule(OS, X, OS, X, Move::Left);
    rule(OS, B, OS, B, Move::Left);
    rule(OS, Xbar, OS, X, Move::Left);
    rule(OS, REnd, OS, REnd, Move::Left);
    rule(SLeft, LEnd, IS, LEnd, Move::Right);
    rule(SLeft, X, SLeft, X, Move::Left);
    rule(SLeft, B, SLeft, B, Move::Left);
    rule(SLeft, Xbar, IS, X, Move::Right);
    rule(SLeft, REnd, SLeft, REnd, Move::Left);
    // Inner loop: move right to the next X, replace it with B and insert a
    // marked delimiter by shifting everything one cell right.
    rule(IS, LEnd, IS, LEnd, Move::Right);
    rule(IS, X, WXbar, B, Move::Right);
    rule(IS, B, IS, B, Move::Right);
    rule(IS, Xbar, IS, Xbar, Move::Right);
    rule(IS, REnd, E1, B, Move::Right);
    for (State w : {WXbar, WX, WB}) {
      Sym carried = w == WXbar ? Xbar : w == WX ? X : B;
      rule(w, LEnd, w, LEnd, Move::Right);
      rule(w, X, WX, carried, Move::Right);
      rule(w, B, WB, carried, Move::Right);
      rule(w, Xbar, WXbar, carried, Move::Right);
      rule(w, REnd, WR, carried, Move::Right);
    }
    rule(WR, Blank, SLeft, REnd, Move::Left);
    // Wind down: extend the tape with B X and restore the right end marker.
    rule(E1, Blank, E2, X, Move::Right);
    rule(E2, Blank, OS, REnd, Move::Left);
    return m;
  }();
  return tm;
}

std::optional<TmOutcome> layer1_delta(uint8_t state, uint8_t sym) {
  return layer1_machine().delta[state][sym];
}

// --- horizontal rules -------------------------------------------------------

namespace {

// Vertices of the legal-pair graph; kNone marks tiles outside the graph.
enum Vertex : int {
  kBorder = 0,
  kHeadLEnd = 1,
  kLEnd = 2,
  kBlueTape = 3,
  kHeadMid = 4,
  kRedTape = 5,
  kREnd = 6,
  kBlankV = 7,
  kHeadREnd = 8,
  kHeadBlank = 9,
  kNone = 10
};

bool end_phase_state(uint8_t q) { return q == E1 || q == E2 || q == WR; }

int vertex_of(const Tile& t) {
  if (t.is_head()) {
    if (t.sym == Blank) return end_phase_state(t.state) ? kHeadBlank : kNone;
    if (end_phase_state(t.state)) return kNone;
    if (t.sym == LEnd) return kHeadLEnd;
    if (t.sym == REnd) return kHeadREnd;
    return kHeadMid;  // X, B, Xbar under the head
  }
  switch (t.sym) {
    case LEnd:
      return kLEnd;
    case REnd:
      return kREnd;
    case Blank:
      return kBlankV;
    default:
      return t.color == Blue ? kBlueTape : t.color == Red ? kRedTape : kNone;
  }
}

const std::array<uint16_t, 11>& successor_masks() {
  static const std::array<uint16_t, 11> masks = [] {
    std::array<uint16_t, 11> m{};
    auto set = [&](int v, std::initializer_list<int> next) {
      for (int u : next) m[v] |= uint16_t(1u << u);
    };
    set(kBorder, {kHeadLEnd, kLEnd});
    set(kHeadLEnd, {kRedTape, kREnd});
    set(kLEnd, {kBlueTape, kHeadMid, kHeadREnd, kHeadBlank});
    set(kBlueTape, {kBlueTape, kHeadMid, kHeadREnd, kHeadBlank});
    set(kHeadMid, {kRedTape, kREnd});
    set(kRedTape, {kRedTape, kREnd});
    set(kREnd, {kBlankV, kBorder});
    set(kBlankV, {kBlankV, kBorder});
    set(kHeadREnd, {kBlankV, kBorder});
    set(kHeadBlank, {kBlankV, kBorder});
    return m;
  }();
  return masks;
}

bool edge(int a, int b) {
  if (a == kNone || b == kNone) return false;
  return (successor_masks()[a] >> b) & 1u;
}

}  // namespace

bool legal_pair(const Tile& left, const Tile& right) {
  return edge(vertex_of(left), vertex_of(right));
}
bool legal_pair_border_left(const Tile& right) { return edge(kBorder, vertex_of(right)); }
bool legal_pair_border_right(const Tile& left) { return edge(vertex_of(left), kBorder); }

int row_h(const Row& row, int width) {
  int h = 0;
  if (!legal_pair_border_left(row.cell(0))) ++h;
  int upto = std::min(row.prefix_len(), width - 1);
  for (int i = 0; i < upto; ++i)
    if (!legal_pair(row.cell(i), row.cell(i + 1))) ++h;
  if (!legal_pair_border_right(row.cell(width - 1))) ++h;
  return h;
}

bool is_valid_row(const Row& row, int width, int* first_violation) {
  if (!legal_pair_border_left(row.cell(0))) {
    if (first_violation) *first_violation = -1;
    return false;
  }
  int upto = std::min(row.prefix_len(), width - 1);
  for (int i = 0; i < upto; ++i) {
    if (!legal_pair(row.cell(i), row.cell(i + 1))) {
      if (first_violation) *first_violation = i;
      return false;
    }
  }
  if (!legal_pair_border_right(row.cell(width - 1))) {
    if (first_violation) *first_violation = width - 1;
    return false;
  }
  return true;
}

// --- vertical rules ---------------------------------------------------------

namespace {

const TmSquareRules& l1_square_rules() {
  static const TmSquareRules rules(layer1_machine());
  return rules;
}

TmTile to_tm_tile(const std::optional<Tile>& t) {
  if (!t) return kWallTile;
  return t->is_head() ? head_tile(t->state, t->sym) : tape_tile(t->sym);
}

}  // namespace

bool legal_square(std::optional<Tile> bl, std::optional<Tile> br, std::optional<Tile> tl,
                  std::optional<Tile> tr) {
  if (!l1_square_rules().legal(to_tm_tile(bl), to_tm_tile(br), to_tm_tile(tl), to_tm_tile(tr)))
    return false;
  // Vertically aligned tape tiles keep their color.
  for (auto [lo, hi] : {std::pair{bl, tl}, std::pair{br, tr}}) {
    if (lo && hi && !lo->is_head() && !hi->is_head() && lo->sym == hi->sym &&
        colorable(lo->sym) && lo->color != hi->color)
      return false;
  }
  // Beside a head tile, colored tiles are blue on the left and red on the right.
  for (auto [left, right] : {std::pair{bl, br}, std::pair{tl, tr}}) {
    if (!left || !right) continue;
    if (left->is_head() && !right->is_head() && colorable(right->sym) && right->color != Red)
      return false;
    if (right->is_head() && !left->is_head() && colorable(left->sym) && left->color != Blue)
      return false;
  }
  return true;
}

int squares_v(const Row& lower, const Row& upper, int width) {
  int v = 0;
  int upto = std::min(std::max(lower.prefix_len(), upper.prefix_len()), width - 1);
  // c = -1 is the square against the left wall.
  for (int c = -1; c < upto; ++c) {
    std::optional<Tile> bl = c >= 0 ? std::optional<Tile>(lower.cell(c)) : std::nullopt;
    std::optional<Tile> tl = c >= 0 ? std::optional<Tile>(upper.cell(c)) : std::nullopt;
    std::optional<Tile> br, tr;
    if (c + 1 < width) {
      br = lower.cell(c + 1);
      tr = upper.cell(c + 1);
    }
    if (!legal_square(bl, br, tl, tr)) ++v;
  }
  // Right wall square, only when content reaches it.
  if (upto == width - 1 &&
      !legal_square(lower.cell(width - 1), std::nullopt, upper.cell(width - 1), std::nullopt))
    ++v;
  return v;
}

namespace {

// The bottom border pins r_1 to the starting configuration: legal pairs
// above two border tiles chain border -> left end -> (q_e2/#) -> #*.
int init_vertex(const Tile& t) {
  if (t.is_head()) return (t.state == E2 && t.sym == Blank) ? 2 : -1;
  if (t.sym == LEnd) return 1;
  if (t.sym == Blank) return 3;
  return -1;
}

bool init_edge(int a, int b) {
  if (a < 0 || b < 0) return false;
  if (a == 0) return b == 1;   // border -> left end
  if (a == 1) return b == 2;   // left end -> (q_e2/#)
  if (a == 3) return b == 3 || b == 0;
  return b == 3;               // (q_e2/#) -> #
}

}  // namespace

bool init_pair_ok(std::optional<Tile> left, std::optional<Tile> right) {
  int a = left ? init_vertex(*left) : 0;
  int b = right ? init_vertex(*right) : 0;
  if (!left && !right) return true;
  if (!right) return init_edge(a, 0);
  return init_edge(a, b);
}

int init_v(const Row& first_row, int width) {
  int v = 0;
  if (!init_pair_ok(std::nullopt, first_row.cell(0))) ++v;
  int upto = std::min(first_row.prefix_len(), width - 1);
  for (int i = 0; i < upto; ++i)
    if (!init_pair_ok(first_row.cell(i), first_row.cell(i + 1))) ++v;
  if (first_row.prefix_len() >= width && !init_pair_ok(first_row.cell(width - 1), std::nullopt))
    ++v;
  return v;
}

// --- dynamics ---------------------------------------------------------------

int head_position(const Row& row) {
  for (int i = 0; i < row.prefix_len(); ++i)
    if (row.cells[i].is_head()) return i;
  return -1;
}

namespace {

// Applies one machine step for the head at `pos` onto `out` (already a tape
// copy of the source row). Returns false when no rule applies.
bool apply_head(const Row& src, std::vector<Tile>& out, int pos, int width) {
  const Tile& h = src.cells[pos];
  auto rule = layer1_delta(h.state, h.sym);
  if (!rule) return false;
  int target = rule->move == Move::Left ? pos - 1 : rule->move == Move::Right ? pos + 1 : pos;
  if (target < 0 || target >= width) return false;  // never happens on valid rows
  if (target >= int(out.size())) out.resize(target + 1, tape(Blank));
  Sym written = Sym(rule->write);
  Color color = NoColor;
  if (colorable(written)) color = pos < target ? Blue : Red;
  if (rule->move == Move::Stay) {
    out[pos] = head(State(rule->next_state), written);
  } else {
    out[pos] = tape(written, color);
    out[target] = head(State(rule->next_state), Sym(out[target].sym));
  }
  return true;
}

}  // namespace

Row continue_row(const Row& row, int width) {
  Row out;
  out.cells = row.cells;
  for (int i = 0; i < row.prefix_len(); ++i) {
    if (row.cells[i].is_head()) apply_head(row, out.cells, i, width);
  }
  out.trim();
  return out;
}

Row next_row(const Row& row, int width) {
  if (!is_valid_row(row, width)) fail(errc::precondition, "next_row requires a valid row");
  return continue_row(row, width);
}

Row initial_row() {
  Row r;
  r.cells = {tape(LEnd), head(E2, Blank)};
  return r;
}

bool is_end_row(const Row& row, int width) {
  int p = head_position(row);
  if (p < 0) return false;
  const Tile& h = row.cells[p];
  if (h.state != E2 || h.sym != Blank) return false;
  if (!(row.cell(0).sym == LEnd && !row.cell(0).is_head())) return false;
  for (int i = 1; i < p; ++i) {
    const Tile& t = row.cells[i];
    if (t.is_head() || !colorable(t.sym)) return false;
  }
  for (int i = p + 1; i < row.prefix_len(); ++i)
    if (!(row.cells[i] == tape(Blank))) return false;
  return is_valid_row(row, width);
}

std::vector<Row> simulate_layer1(int n) {
  if (n < 5) fail(errc::dimension, "grid side must be at least 5");
  int width = n - 2;
  std::vector<Row> rows;
  rows.reserve(n - 2);
  rows.push_back(initial_row());
  for (int t = 1; t <= n - 3; ++t) rows.push_back(next_row(rows.back(), width));
  return rows;
}

// --- intervals ---------------------------------------------------------------

std::vector<Interval> intervals(const Row& row) {
  std::vector<Interval> out;
  int prev = -1;
  for (int i = 0; i < row.prefix_len(); ++i) {
    int w = tile_weight(row.cells[i]);
    if (w == 0) continue;
    if (prev >= 0) out.push_back({prev, i});
    if (w == 2) out.push_back({i, i});
    prev = i;
  }
  return out;
}

std::vector<long long> interval_sizes(const Row& row) {
  std::vector<long long> out;
  for (const Interval& iv : intervals(row)) out.push_back(iv.size());
  return out;
}

int row_weight(const Row& row) {
  int w = 0;
  for (const Tile& t : row.cells) w += tile_weight(t);
  return w;
}

int row_length(const Row& row) {
  // Length counts non-blank tape contents; a head over a blank does not count.
  int l = 0;
  for (const Tile& t : row.cells)
    if (t.sym != Blank) ++l;
  return l;
}

long long x_of_sizes(std::span<const long long> sizes) {
  long long x = 0;
  for (size_t j = 0; j < sizes.size(); ++j) x += 2 * (long long)(j + 1) * (sizes[j] - 1) + 1;
  return x;
}

long long x_value(const Row& row) {
  auto s = interval_sizes(row);
  return x_of_sizes(s);
}

long long a_value(std::span<const long long> sizes) {
  if (sizes.empty()) return 0;
  long long a = 0;
  for (size_t j = 0; j + 1 < sizes.size(); ++j) a += std::llabs(sizes[j] - sizes[j + 1] - 1);
  a += std::llabs(sizes.back() - 2);
  return a;
}

// --- closed forms -------------------------------------------------------------

long long f_outer(long long m) {
  // sum over t = 1..m-1 of X(t+1, t, ..., 2) = t(t+1)(t+2)/3 + t.
  __int128 k = m - 1;
  __int128 cubes = k * (k + 1) * (k + 2) * (k + 3) / 4;  // sum of t(t+1)(t+2)
  __int128 total = cubes / 3 + k * (k + 1) / 2;
  return (long long)total;
}

long long end_row_index(long long m) { return m + f_outer(m); }

long long mu(long long n) {
  if (n < 5) fail(errc::dimension, "grid side must be at least 5");
  long long lo = 1, hi = 2;
  while (end_row_index(hi) <= n - 2) hi *= 2;
  while (lo < hi) {
    long long mid = (lo + hi + 1) / 2;
    if (end_row_index(mid) <= n - 2) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

// --- clean/corrupt -------------------------------------------------------------

namespace {

struct AnnRow {
  Row row;
  std::vector<TaggedInterval> ann;
};

std::vector<TaggedInterval> plain_intervals(const Row& r) {
  std::vector<TaggedInterval> out;
  for (const Interval& iv : intervals(r)) out.push_back({iv.start, iv.end, false, 0});
  return out;
}

}  // namespace

std::vector<std::vector<TaggedInterval>> tag_clean_corrupt(const std::vector<Row>& rows,
                                                           int width) {
  std::vector<std::vector<TaggedInterval>> result(rows.size());
  AnnRow prev;  // previous row with its designations
  for (size_t idx = 0; idx < rows.size(); ++idx) {
    long long t = (long long)idx + 1;  // grid row index
    const Row& r = rows[idx];

    AnnRow cmp;  // comparison row
    if (t == 1) {
      cmp.row = initial_row();
      cmp.ann = {{0, 1, true, 1}};
    } else if (!is_valid_row(prev.row, width)) {
      cmp = prev;
    } else {
      cmp.row = next_row(prev.row, width);
      cmp.ann = plain_intervals(cmp.row);
      // Designations carry over by interval order; a new rightmost interval
      // is clean with tag t.
      for (size_t j = 0; j < cmp.ann.size(); ++j) {
        if (j < prev.ann.size()) {
          cmp.ann[j].clean = prev.ann[j].clean;
          cmp.ann[j].tag = prev.ann[j].tag;
        } else {
          cmp.ann[j].clean = true;
          cmp.ann[j].tag = t;
        }
      }
    }

    std::vector<TaggedInterval> ann = plain_intervals(r);
    // Both interval lists are ordered by start position; merge to find the
    // comparison interval occupying the same cells.
    size_t ci = 0;
    for (auto& iv : ann) {
      while (ci < cmp.ann.size() && cmp.ann[ci].start < iv.start) ++ci;
      const TaggedInterval* match = nullptr;
      for (size_t k = ci; k < cmp.ann.size() && cmp.ann[k].start == iv.start; ++k) {
        if (cmp.ann[k].end == iv.end) {
          match = &cmp.ann[k];
          break;
        }
      }
      if (!match) continue;
      bool same = true;
      for (int c = iv.start; c <= iv.end && same; ++c) same = r.cell(c) == cmp.row.cell(c);
      if (!same) continue;
      iv.clean = match->clean;
      iv.tag = match->tag;
    }
    result[idx] = ann;
    prev.row = r;
    prev.ann = std::move(ann);
  }
  return result;
}

// --- segments -------------------------------------------------------------------

std::vector<Segment> segment_decomposition(const std::vector<int>& costs,
                                           const std::vector<char>& end_row) {
  int top = int(costs.size()) - 1;
  std::vector<Segment> segs;
  segs.push_back({0, 1, end_row[1] && costs[1] == 0});
  int begin = 2;
  while (begin <= top) {
    int end = begin;
    while (end < top && !(end_row[end] || costs[end] > 0)) ++end;
    bool boundary = end_row[end] || costs[end] > 0;
    bool complete = boundary && end_row[end] && costs[end] == 0 && costs[segs.back().last_row] == 0;
    segs.push_back({begin, end, complete});
    begin = end + 1;
  }
  return segs;
}

// --- text -------------------------------------------------------------------------

namespace {
const char* kSymName[6] = {"\xE2\x8A\xB2", "X", "B", "X\xCC\x84", "\xE2\x8A\xB3", "#"};
const char* kStateName[9] = {"q_OS", "q_left", "q_IS", "q_wX\xCC\x84", "q_wX",
                             "q_wB", "q_w\xE2\x8A\xB3", "q_e1", "q_e2"};
}  // namespace

std::string tile_name(const Tile& t) {
  std::string s;
  if (t.is_head()) {
    s = "(" + std::string(kStateName[t.state]) + "/" + kSymName[t.sym] + ")";
  } else {
    s = kSymName[t.sym];
    if (t.color == Red) s += ":r";
    if (t.color == Blue) s += ":b";
  }
  return s;
}

std::string row_to_string(const Row& row) {
  std::string s;
  for (int i = 0; i < row.prefix_len(); ++i) {
    if (i) s += ' ';
    s += tile_name(row.cells[i]);
  }
  return s;
}

std::optional<Tile> tile_from_name(const std::string& name) {
  for (int sym = 0; sym < 6; ++sym) {
    if (name == kSymName[sym]) return tape(Sym(sym));
    if (colorable(sym)) {
      if (name == std::string(kSymName[sym]) + ":r") return tape(Sym(sym), Red);
      if (name == std::string(kSymName[sym]) + ":b") return tape(Sym(sym), Blue);
    }
  }
  if (name.size() > 2 && name.front() == '(' && name.back() == ')') {
    auto slash = name.rfind('/');
    if (slash == std::string::npos) return std::nullopt;
    std::string qs = name.substr(1, slash - 1), cs = name.substr(slash + 1, name.size() - slash - 2);
    for (int q = 0; q < 9; ++q)
      if (qs == kStateName[q])
        for (int sym = 0; sym < 6; ++sym)
          if (cs == kSymName[sym]) return head(State(q), Sym(sym));
  }
  return std::nullopt;
}

}  // namespace ti::l1
