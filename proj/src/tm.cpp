#include "ti/tm.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace ti {

using nlohmann::json;

int TuringMachine::state_id(const std::string& name) const {
  for (int i = 0; i < state_count(); ++i)
    if (states[i] == name) return i;
  return -1;
}

int TuringMachine::symbol_id(const std::string& name) const {
  for (int i = 0; i < symbol_count(); ++i)
    if (alphabet[i] == name) return i;
  return -1;
}

int TuringMachine::add_state(const std::string& name) {
  int id = state_id(name);
  if (id >= 0) return id;
  states.push_back(name);
  for (auto& row : delta) (void)row;
  delta.emplace_back(alphabet.size());
  if (!state_weight.empty()) state_weight.push_back(0);
  return state_count() - 1;
}

int TuringMachine::add_symbol(const std::string& name) {
  int id = symbol_id(name);
  if (id >= 0) return id;
  alphabet.push_back(name);
  for (auto& row : delta) row.emplace_back();
  if (!symbol_weight.empty()) symbol_weight.push_back(0);
  return symbol_count() - 1;
}

void TuringMachine::set_rule(int state, int read, int next, int write, Move m) {
  delta[state][read] = TmOutcome{next, write, m};
}

void TuringMachine::set_rule(const std::string& state, const std::string& read,
                             const std::string& next, const std::string& write, Move m) {
  int s = add_state(state);
  int r = add_symbol(read);
  int n = add_state(next);
  int w = add_symbol(write);
  set_rule(s, r, n, w, m);
}

bool TuringMachine::direction_unique() const {
  std::vector<std::unordered_set<int>> incoming(state_count());
  for (int s = 0; s < state_count(); ++s)
    for (int a = 0; a < symbol_count(); ++a)
      if (delta[s][a]) incoming[delta[s][a]->next_state].insert(int(delta[s][a]->move));
  for (auto& dirs : incoming)
    if (dirs.size() > 1) return false;
  return true;
}

bool TuringMachine::lr_direction_unique() const {
  std::vector<std::unordered_set<int>> incoming(state_count());
  for (int s = 0; s < state_count(); ++s)
    for (int a = 0; a < symbol_count(); ++a)
      if (delta[s][a]) incoming[delta[s][a]->next_state].insert(int(delta[s][a]->move));
  for (auto& dirs : incoming)
    if (dirs.count(int(Move::Left)) && dirs.count(int(Move::Right))) return false;
  return true;
}

std::optional<TmConfiguration> tm_step(const TuringMachine& tm, const TmConfiguration& cfg) {
  int sym = cfg.symbol_at(tm, cfg.head);
  const auto& out = tm.delta[cfg.state][sym];
  if (!out) return std::nullopt;
  TmConfiguration next = cfg;
  while (cfg.head >= int(next.tape.size())) next.tape.push_back(tm.blank);
  next.tape[cfg.head] = out->write;
  next.state = out->next_state;
  if (out->move == Move::Left) {
    if (cfg.head == 0) {
      next.tape.insert(next.tape.begin(), tm.blank);
    } else {
      next.head = cfg.head - 1;
    }
  } else if (out->move == Move::Right) {
    next.head = cfg.head + 1;
    if (next.head == int(next.tape.size())) next.tape.push_back(tm.blank);
  }
  return next;
}

TuringMachine normalize_direction_uniqueness(const TuringMachine& tm) {
  std::vector<std::unordered_set<int>> incoming(tm.state_count());
  for (int s = 0; s < tm.state_count(); ++s)
    for (int a = 0; a < tm.symbol_count(); ++a)
      if (tm.delta[s][a]) incoming[tm.delta[s][a]->next_state].insert(int(tm.delta[s][a]->move));

  bool needs_split = false;
  for (auto& dirs : incoming)
    if (dirs.size() > 1) needs_split = true;
  if (!needs_split) return tm;

  static const char* suffix[3] = {"@L", "@R", "@S"};
  TuringMachine out;
  out.alphabet = tm.alphabet;
  out.blank = tm.blank;
  out.direction = tm.direction;
  out.symbol_weight = tm.symbol_weight;
  if (!tm.state_weight.empty()) out.state_weight = {};

  // copy_of[q][dir] is the split copy of q reached by moves of that
  // direction; states with at most one incoming direction keep one copy.
  std::vector<std::array<int, 3>> copy_of(tm.state_count(), {-1, -1, -1});
  std::vector<int> canonical(tm.state_count(), -1);
  for (int q = 0; q < tm.state_count(); ++q) {
    if (incoming[q].size() > 1) {
      for (int d : incoming[q]) {
        int id = out.add_state(tm.states[q] + suffix[d]);
        copy_of[q][d] = id;
        if (canonical[q] < 0) canonical[q] = id;
      }
    } else {
      int id = out.add_state(tm.states[q]);
      for (int d = 0; d < 3; ++d) copy_of[q][d] = id;
      canonical[q] = id;
    }
  }
  if (!tm.state_weight.empty()) {
    out.state_weight.assign(out.state_count(), 0);
    for (int q = 0; q < tm.state_count(); ++q)
      for (int d = 0; d < 3; ++d)
        if (copy_of[q][d] >= 0) out.state_weight[copy_of[q][d]] = tm.state_weight[q];
  }
  for (int q = 0; q < tm.state_count(); ++q) {
    for (int a = 0; a < tm.symbol_count(); ++a) {
      const auto& o = tm.delta[q][a];
      if (!o) continue;
      int target = copy_of[o->next_state][int(o->move)];
      if (target < 0) target = canonical[o->next_state];
      for (int d = 0; d < 3; ++d) {
        int src = copy_of[q][d];
        if (src < 0) continue;
        out.set_rule(src, a, target, o->write, o->move);
      }
    }
  }
  return out;
}

// --- squares --------------------------------------------------------------

uint64_t tm_square_key(TmTile bl, TmTile br, TmTile tl, TmTile tr) {
  // Symbols and states of every machine here fit in 8 bits (wall = -2,
  // tape marker = -1 map onto distinct byte values).
  auto pack8 = [](TmTile t) {
    return (uint64_t(uint8_t(int8_t(t.sym))) | (uint64_t(uint8_t(int8_t(t.state))) << 8));
  };
  return pack8(bl) | (pack8(br) << 16) | (pack8(tl) << 32) | (pack8(tr) << 48);
}

void TmSquareRules::add(TmTile bl, TmTile br, TmTile tl, TmTile tr) {
  if (direction_ == TmDirection::Down) {
    std::swap(bl, tl);
    std::swap(br, tr);
  }
  legal_.insert(tm_square_key(bl, br, tl, tr));
}

TmSquareRules::TmSquareRules(const TuringMachine& tm, std::vector<int> head_symbols) {
  if (!tm.lr_direction_unique())
    fail(errc::precondition, "machine must be direction-unique before compiling to squares");
  direction_ = tm.direction;
  if (head_symbols.empty())
    for (int a = 0; a < tm.symbol_count(); ++a) head_symbols.push_back(a);

  std::vector<TmTile> tapes;
  for (int a = 0; a < tm.symbol_count(); ++a) tapes.push_back(tape_tile(a));
  tapes.push_back(kWallTile);

  // Without a head, columns copy upward.
  for (TmTile x : tapes)
    for (TmTile y : tapes) add(x, y, x, y);

  for (int q = 0; q < tm.state_count(); ++q) {
    for (int a = 0; a < tm.symbol_count(); ++a) {
      const auto& o = tm.delta[q][a];
      if (!o) continue;
      TmTile from = head_tile(q, a);
      TmTile wrote = tape_tile(o->write);
      if (o->move == Move::Left) {
        for (int x : head_symbols) add(tape_tile(x), from, head_tile(o->next_state, x), wrote);
        for (TmTile y : tapes) add(from, y, wrote, y);
        for (TmTile y : tapes)
          for (int x : head_symbols) add(y, tape_tile(x), y, head_tile(o->next_state, x));
      } else if (o->move == Move::Right) {
        for (int x : head_symbols) add(from, tape_tile(x), wrote, head_tile(o->next_state, x));
        for (TmTile y : tapes) add(y, from, y, wrote);
        for (TmTile y : tapes)
          for (int x : head_symbols) add(tape_tile(x), y, head_tile(o->next_state, x), y);
      } else {
        TmTile to = head_tile(o->next_state, o->write);
        for (TmTile x : tapes) {
          add(from, x, to, x);
          add(x, from, x, to);
        }
      }
    }
  }
}

bool TmSquareRules::enters_state(TmTile bl, TmTile br, TmTile tl, TmTile tr, int state) const {
  if (direction_ == TmDirection::Down) {
    std::swap(bl, tl);
    std::swap(br, tr);
  }
  bool to = (tl.is_head() && tl.state == state) || (tr.is_head() && tr.state == state);
  bool from = (bl.is_head() && bl.state != state) || (br.is_head() && br.state != state);
  bool already = (bl.is_head() && bl.state == state) || (br.is_head() && br.state == state);
  return to && from && !already;
}

// --- json -----------------------------------------------------------------

static const char* move_name(Move m) { return m == Move::Left ? "L" : m == Move::Right ? "R" : "S"; }

static Move move_from(const std::string& s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  if (s == "S" || s == "-") return Move::Stay;
  fail(errc::io, "bad move " + s);
}

std::string tm_to_json(const TuringMachine& tm) {
  json j;
  j["states"] = tm.states;
  j["alphabet"] = tm.alphabet;
  j["blank"] = tm.alphabet.at(tm.blank);
  j["direction"] = tm.direction == TmDirection::Up ? "up" : "down";
  json rules = json::array();
  for (int s = 0; s < tm.state_count(); ++s)
    for (int a = 0; a < tm.symbol_count(); ++a)
      if (tm.delta[s][a]) {
        const auto& o = *tm.delta[s][a];
        rules.push_back({{"state", tm.states[s]},
                         {"read", tm.alphabet[a]},
                         {"write", tm.alphabet[o.write]},
                         {"next", tm.states[o.next_state]},
                         {"move", move_name(o.move)}});
      }
  j["rules"] = rules;
  if (!tm.symbol_weight.empty() || !tm.state_weight.empty()) {
    json w;
    if (!tm.symbol_weight.empty()) {
      json sw;
      for (int a = 0; a < tm.symbol_count(); ++a) sw[tm.alphabet[a]] = tm.symbol_weight[a];
      w["symbols"] = sw;
    }
    if (!tm.state_weight.empty()) {
      json qw;
      for (int s = 0; s < tm.state_count(); ++s) qw[tm.states[s]] = tm.state_weight[s];
      w["states"] = qw;
    }
    j["weights"] = w;
  }
  return j.dump(2);
}

TuringMachine tm_from_json(const std::string& text) {
  json j = json::parse(text);
  TuringMachine tm;
  for (auto& s : j.at("states")) tm.add_state(s.get<std::string>());
  for (auto& a : j.at("alphabet")) tm.add_symbol(a.get<std::string>());
  tm.blank = tm.symbol_id(j.at("blank").get<std::string>());
  if (tm.blank < 0) fail(errc::io, "blank symbol missing from alphabet");
  tm.direction = j.value("direction", "up") == std::string("down") ? TmDirection::Down : TmDirection::Up;
  for (auto& r : j.at("rules"))
    tm.set_rule(r.at("state").get<std::string>(), r.at("read").get<std::string>(),
                r.at("next").get<std::string>(), r.at("write").get<std::string>(),
                move_from(r.at("move").get<std::string>()));
  if (j.contains("weights")) {
    auto& w = j["weights"];
    if (w.contains("symbols")) {
      tm.symbol_weight.assign(tm.symbol_count(), 0);
      for (auto& [k, v] : w["symbols"].items()) tm.symbol_weight[tm.symbol_id(k)] = v.get<int>();
    }
    if (w.contains("states")) {
      tm.state_weight.assign(tm.state_count(), 0);
      for (auto& [k, v] : w["states"].items()) tm.state_weight[tm.state_id(k)] = v.get<int>();
    }
  }
  return tm;
}

// --- oracle machines --------------------------------------------------------

OracleRun run_oracle_machine(const OracleMachine& om, const std::string& x,
                             const std::vector<int>& responses, long long max_steps) {
  const TuringMachine& tm = om.tm;
  TmConfiguration cfg;
  for (char c : x) cfg.tape.push_back(c == '1' ? om.sym1 : om.sym0);
  if (cfg.tape.empty()) cfg.tape.push_back(tm.blank);
  cfg.head = 0;
  cfg.state = 0;

  OracleRun run;
  auto is_bit = [&](int s) { return s == om.sym0 || s == om.sym1; };
  for (long long step = 0; step < max_steps; ++step) {
    auto ask = om.ask_resume.find(cfg.state);
    if (ask != om.ask_resume.end()) {
      std::string query;
      int p = cfg.head;
      while (p < int(cfg.tape.size()) && is_bit(cfg.tape[p])) {
        query.push_back(cfg.tape[p] == om.sym1 ? '1' : '0');
        ++p;
      }
      run.queries.push_back(query);
      if (run.queries.size() > responses.size()) return run;  // unanswered query
      int answer = responses[run.queries.size() - 1];
      for (int q = cfg.head; q < p; ++q) cfg.tape[q] = tm.blank;
      cfg.tape[cfg.head] = answer ? om.sym1 : om.sym0;
      cfg.state = ask->second;
      continue;
    }
    if (cfg.state == om.done_state) {
      int lo = cfg.head, hi = cfg.head;
      while (lo > 0 && is_bit(cfg.tape[lo - 1])) --lo;
      while (hi + 1 < int(cfg.tape.size()) && is_bit(cfg.tape[hi + 1])) ++hi;
      long long value = 0;
      for (int p = lo; p <= hi; ++p) value = value * 2 + (cfg.tape[p] == om.sym1 ? 1 : 0);
      run.output = value;
      run.completed = true;
      return run;
    }
    auto next = tm_step(tm, cfg);
    if (!next) return run;  // halted outside the protocol
    cfg = *next;
  }
  return run;
}

std::string oracle_machine_to_json(const OracleMachine& om) {
  json j = json::parse(tm_to_json(om.tm));
  json ask;
  for (auto& [s, resume] : om.ask_resume) ask[om.tm.states[s]] = om.tm.states[resume];
  j["oracle"] = {{"ask", ask},
                 {"done", om.tm.states.at(om.done_state)},
                 {"zero", om.tm.alphabet.at(om.sym0)},
                 {"one", om.tm.alphabet.at(om.sym1)}};
  return j.dump(2);
}

OracleMachine oracle_machine_from_json(const std::string& text) {
  OracleMachine om;
  om.tm = tm_from_json(text);
  json j = json::parse(text);
  const json& o = j.at("oracle");
  for (auto& [k, v] : o.at("ask").items())
    om.ask_resume[om.tm.state_id(k)] = om.tm.state_id(v.get<std::string>());
  om.done_state = om.tm.state_id(o.at("done").get<std::string>());
  om.sym0 = om.tm.symbol_id(o.value("zero", "0"));
  om.sym1 = om.tm.symbol_id(o.value("one", "1"));
  return om;
}

}  // namespace ti
