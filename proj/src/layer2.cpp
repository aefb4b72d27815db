#include "ti/layer2.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace ti::l2 {

const TuringMachine& binary_counter_machine() {
  static const TuringMachine tm = [] {
    TuringMachine m;
    m.add_state("q_l");
    m.add_state("q_r");
    for (const char* a : {"S", "0", "1", "B", "T", "X", "#"}) m.add_symbol(a);
    m.blank = Blank;
    m.direction = TmDirection::Down;
    m.set_rule(QL, S, QR, S, Move::Right);
    m.set_rule(QR, D1, QR, D0, Move::Right);
    m.set_rule(QR, D0, QL, D1, Move::Left);
    m.set_rule(QR, B, QL, D1, Move::Left);
    m.set_rule(QL, D0, QL, D0, Move::Left);
    m.set_rule(QL, D1, QL, D1, Move::Left);
    m.set_rule(QR, T, QR, T, Move::Stay);
    m.set_rule(QL, T, QL, T, Move::Stay);
    return m;
  }();
  return tm;
}

const std::vector<int>& counter_head_symbols() {
  static const std::vector<int> syms = {S, D0, D1, B, T};
  return syms;
}

long long bctm_steps(const std::string& x) {
  long long value = 1;
  for (auto it = x.rbegin(); it != x.rend(); ++it) value = value * 2 + (*it == '1' ? 1 : 0);
  long long ones = 1 + std::count(x.begin(), x.end(), '1');
  return 4 * value - 2 * ones;
}

long long bctm_steps_simulated(const std::string& x) {
  const TuringMachine& tm = binary_counter_machine();
  std::string target = x + "1";
  TmConfiguration cfg;
  cfg.tape.assign(x.size() + 5, B);  // a strip interior is B-filled
  cfg.tape[0] = S;
  cfg.head = 0;
  cfg.state = QL;
  long long limit = 8 * (2LL << x.size()) + 16;
  for (long long step = 1; step <= limit; ++step) {
    auto next = tm_step(tm, cfg);
    if (!next) fail(errc::precondition, "counter halted unexpectedly");
    cfg = *next;
    if (cfg.state == QL && cfg.head == 0) {
      bool match = true;
      for (size_t i = 0; i < target.size() && match; ++i) {
        int sym = cfg.symbol_at(tm, 1 + int(i));
        match = sym == (target[i] == '1' ? D1 : D0);
      }
      if (match && cfg.symbol_at(tm, 1 + int(target.size())) == B) return step;
    }
  }
  fail(errc::capacity, "counter simulation exceeded its step limit");
}

long long reduce_input(const std::string& x) {
  if (x.empty()) fail(errc::usage, "input string must be nonempty");
  for (char c : x)
    if (c != '0' && c != '1') fail(errc::usage, "input string must be binary");
  return bctm_steps(x) + 3;
}

bool Row::operator==(const Row& o) const {
  int m = std::max(prefix_len(), o.prefix_len());
  for (int i = 0; i < m; ++i)
    if (!(cell(i) == o.cell(i))) return false;
  return true;
}

Row translate_l1_to_l2(const l1::Row& top) {
  Row out;
  out.cells.assign(top.prefix_len(), tape_tile(Blank));
  for (int i = 0; i < top.prefix_len(); ++i) {
    const l1::Tile& t = top.cells[i];
    if (l1::tile_weight(t) > 0) {
      out.cells[i] = tape_tile(X);
    } else if (t.sym == l1::Blank) {
      out.cells[i] = tape_tile(Blank);
    } else {
      out.cells[i] = tape_tile(B);  // placeholder, resolved per interval below
    }
  }
  for (const l1::Interval& iv : l1::intervals(top)) {
    if (iv.size() == 3) out.cells[iv.start + 1] = tape_tile(T);
    if (iv.size() >= 4) {
      out.cells[iv.start + 1] = head_tile(QL, S);
      out.cells[iv.end - 1] = tape_tile(T);
    }
  }
  while (!out.cells.empty() && out.cells.back() == tape_tile(Blank)) out.cells.pop_back();
  return out;
}

namespace {

// First-row pair graph: border -> X; X -> {head S, T, X, #, border};
// head S -> {B, T}; B -> {B, T}; T -> X; # -> {#, border}.
enum InitV { IvBorder, IvX, IvHeadS, IvB, IvT, IvBlank, IvNone };

int init_vertex(const TmTile& t) {
  if (t.is_head()) return (t.state == QL && t.sym == S) ? IvHeadS : IvNone;
  switch (t.sym) {
    case X:
      return IvX;
    case B:
      return IvB;
    case T:
      return IvT;
    case Blank:
      return IvBlank;
    default:
      return IvNone;
  }
}

bool init_edge(int a, int b) {
  switch (a) {
    case IvBorder:
      return b == IvX;
    case IvX:
      return b == IvHeadS || b == IvT || b == IvX || b == IvBlank || b == IvBorder;
    case IvHeadS:
    case IvB:
      return b == IvB || b == IvT;
    case IvT:
      return b == IvX;
    case IvBlank:
      return b == IvBlank || b == IvBorder;
    default:
      return false;
  }
}

bool translation_ok(const l1::Tile& from, const TmTile& to) {
  if (to.is_head()) {
    if (!(to.state == QL && to.sym == S)) return false;
    return l1::tile_weight(from) == 0 && from.sym != l1::Blank;
  }
  if (from.sym == l1::Blank && !from.is_head()) return to.sym == Blank;
  if (l1::tile_weight(from) > 0) return to.sym == X;
  return to.sym == B || to.sym == T;
}

}  // namespace

bool translation_ok_column(const l1::Tile& from, const TmTile& to) {
  return translation_ok(from, to);
}

bool first_row_pair_ok(const TmTile* left, const TmTile* right) {
  int a = left ? init_vertex(*left) : IvBorder;
  int b = right ? init_vertex(*right) : IvBorder;
  if (!left && !right) return true;
  return init_edge(a, b);
}

int translation_violations(const l1::Row& top, const Row& candidate, int width) {
  int bad = 0;
  int upto = std::min(std::max(top.prefix_len(), candidate.prefix_len()), width);
  // Per-column translation squares.
  for (int i = 0; i < upto; ++i)
    if (!translation_ok(top.cell(i), candidate.cell(i))) ++bad;
  // First-row pairs, checked as initialization squares against the border row.
  if (!init_edge(IvBorder, init_vertex(candidate.cell(0)))) ++bad;
  int pairs = std::min(candidate.prefix_len(), width - 1);
  for (int i = 0; i < pairs; ++i)
    if (!init_edge(init_vertex(candidate.cell(i)), init_vertex(candidate.cell(i + 1)))) ++bad;
  if (candidate.prefix_len() >= width &&
      !init_edge(init_vertex(candidate.cell(width - 1)), IvBorder))
    ++bad;
  return bad;
}

namespace {

// One counter step for the head between walls a and b, applied in place.
void step_strip(Row& row, int a, int b) {
  const TuringMachine& tm = binary_counter_machine();
  int hp = -1;
  for (int i = a + 1; i < b; ++i)
    if (row.cells[i].is_head()) {
      hp = i;
      break;
    }
  if (hp < 0) return;
  TmTile h = row.cells[hp];
  auto out = tm.delta[h.state][h.sym];
  if (!out) return;
  int target = out->move == Move::Left ? hp - 1 : out->move == Move::Right ? hp + 1 : hp;
  if (target <= a || target >= b) return;
  if (out->move == Move::Stay) {
    row.cells[hp] = head_tile(out->next_state, out->write);
  } else {
    row.cells[hp] = tape_tile(out->write);
    row.cells[target] = head_tile(out->next_state, row.cells[target].sym);
  }
}

std::string strip_tape(const Row& row, int start, int end) {
  static const char* names[7] = {"S", "0", "1", "B", "T", "X", "#"};
  std::string out;
  for (int i = start; i <= end; ++i) {
    TmTile t = row.cell(i);
    if (i > start) out += ' ';
    if (t.is_head()) {
      out += t.state == QL ? "(q_l/" : "(q_r/";
      out += names[t.sym];
      out += ')';
    } else {
      out += names[t.sym];
    }
  }
  return out;
}

}  // namespace

Layer2Result simulate_layer2(const Row& first, long long n,
                             const std::vector<l1::TaggedInterval>* l1_tags, bool keep_rows) {
  if (n < 5) fail(errc::dimension, "grid side must be at least 5");
  const TuringMachine& tm = binary_counter_machine();
  Layer2Result res;
  res.first_row = first;
  if (keep_rows) res.rows.push_back(first);

  // Strip boundaries are the X columns; each strip evolves independently.
  std::vector<int> walls;
  for (int i = 0; i < first.prefix_len(); ++i)
    if (!first.cells[i].is_head() && first.cells[i].sym == X) walls.push_back(i);

  Row current = first;
  long long steps = n - 3;
  if (keep_rows) {
    for (long long s = 0; s < steps; ++s) {
      Row next = current;
      for (size_t wi = 0; wi + 1 < walls.size(); ++wi)
        step_strip(next, walls[wi], walls[wi + 1]);
      res.rows.push_back(next);
      current = std::move(next);
    }
  } else {
    // Run each strip to completion on its own small tape.
    for (size_t wi = 0; wi + 1 < walls.size(); ++wi) {
      int a = walls[wi], b = walls[wi + 1];
      int head_pos = -1;
      for (int i = a + 1; i < b; ++i)
        if (current.cells[i].is_head()) head_pos = i;
      if (head_pos < 0) continue;
      TmConfiguration cfg;
      for (int i = a + 1; i < b; ++i) {
        TmTile t = current.cells[i];
        cfg.tape.push_back(t.sym);
      }
      cfg.head = head_pos - (a + 1);
      cfg.state = current.cells[head_pos].state;
      for (long long s = 0; s < steps; ++s) {
        if (cfg.symbol_at(tm, cfg.head) == T) break;  // idles from here on
        auto nx = tm_step(tm, cfg);
        if (!nx) break;
        cfg = *nx;
      }
      for (int i = a + 1; i < b; ++i) current.cells[i] = tape_tile(cfg.tape[i - (a + 1)]);
      current.cells[a + 1 + cfg.head] = head_tile(cfg.state, cfg.tape[cfg.head]);
    }
  }
  res.final_row = current;

  for (size_t wi = 0; wi + 1 < walls.size(); ++wi) {
    StripRecord rec;
    rec.start = walls[wi];
    rec.size = walls[wi + 1] - walls[wi] + 1;
    rec.stuck = false;
    for (int i = walls[wi]; i <= walls[wi + 1]; ++i)
      if (res.final_row.cell(i).is_head() && res.final_row.cell(i).sym == T) rec.stuck = true;
    rec.long_form = rec.size >= 4 && !rec.stuck;
    rec.tape = strip_tape(res.final_row, walls[wi], walls[wi + 1]);
    if (l1_tags) {
      rec.clean = false;
      for (const auto& iv : *l1_tags) {
        if (iv.start == walls[wi] && iv.end == walls[wi + 1]) {
          rec.clean = iv.clean;
          rec.tag = iv.tag;
          break;
        }
      }
    }
    res.census.push_back(rec);
  }
  return res;
}

std::string census_to_json(const std::vector<StripRecord>& census) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : census)
    arr.push_back({{"tag", r.tag},
                   {"size", r.size},
                   {"form", r.long_form ? "long" : "short"},
                   {"clean", r.clean},
                   {"tape", r.tape}});
  return arr.dump(2);
}

std::string row_to_string(const Row& row) {
  return strip_tape(row, 0, row.prefix_len() - 1);
}

}  // namespace ti::l2
