#include "ti/layer34.hpp"

#include "ti/tiles.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace ti::l34 {

using nlohmann::json;

std::string f1_bits(const std::string& digits) {
  std::string out;
  for (char c : digits) out += (c == '2' || c == '3') ? '1' : '0';
  return out;
}

std::string f2_bits(const std::string& digits) {
  std::string out;
  for (char c : digits) out += (c == '1' || c == '3') ? '1' : '0';
  return out;
}

// --- oracle problems ---------------------------------------------------------

OracleProblem problem_from_json(const std::string& text) {
  json j = json::parse(text);
  OracleProblem p;
  p.nbar = j.at("nbar").get<int>();
  p.witness_len = j.value("witness_len", 1);
  p.machine_m = oracle_machine_from_json(j.at("machine_m").dump());
  p.verifier_v = tm_from_json(j.at("verifier_v").dump());
  for (auto& [k, v] : j.at("membership").items()) p.membership[k] = v.get<bool>();
  if (j.contains("f_table"))
    for (auto& e : j["f_table"])
      p.f_table[e.at("x").get<std::string>() + "|" + e.at("z").get<std::string>()] =
          e.at("f").get<long long>();
  return p;
}

std::string problem_to_json(const OracleProblem& p) {
  json j;
  j["nbar"] = p.nbar;
  j["witness_len"] = p.witness_len;
  j["machine_m"] = json::parse(oracle_machine_to_json(p.machine_m));
  j["verifier_v"] = json::parse(tm_to_json(p.verifier_v));
  json mem;
  for (auto& [k, v] : p.membership) mem[k] = v;
  j["membership"] = mem;
  if (!p.f_table.empty()) {
    json ft = json::array();
    for (auto& [k, v] : p.f_table) {
      auto bar = k.find('|');
      ft.push_back({{"x", k.substr(0, bar)}, {"z", k.substr(bar + 1)}, {"f", v}});
    }
    j["f_table"] = ft;
  }
  return j.dump(2);
}

namespace {

// Verifier for "o contains a 1": the witness marks a position; digits are
// marked off pairwise left to right until the witness bit under test is 1.
TuringMachine contains_one_verifier() {
  TuringMachine m;
  for (const char* s :
       {"q0", "q_rd", "q_x0", "q_x0w", "q_x1", "q_x1w", "q_b1", "q_b2", "q_acc", "q_rej"})
    m.add_state(s);
  for (const char* a : {">", "0", "1", "#", "a", "b"}) m.add_symbol(a);
  m.blank = m.symbol_id("#");
  m.set_rule("q0", ">", "q_rd", ">", Move::Right);
  m.set_rule("q_rd", "0", "q_x0", "a", Move::Right);
  m.set_rule("q_rd", "1", "q_x1", "b", Move::Right);
  m.set_rule("q_rd", "#", "q_rej", "#", Move::Stay);
  for (const char* phase : {"q_x0", "q_x1"}) {
    m.set_rule(phase, "0", phase, "0", Move::Right);
    m.set_rule(phase, "1", phase, "1", Move::Right);
    m.set_rule(phase, "#", std::string(phase) + "w", "#", Move::Right);
  }
  for (const char* phase : {"q_x0w", "q_x1w"}) {
    m.set_rule(phase, "a", phase, "a", Move::Right);
    m.set_rule(phase, "b", phase, "b", Move::Right);
    m.set_rule(phase, "#", "q_rej", "#", Move::Stay);
  }
  m.set_rule("q_x0w", "0", "q_b1", "a", Move::Left);
  m.set_rule("q_x0w", "1", "q_b1", "a", Move::Left);
  m.set_rule("q_x1w", "0", "q_b1", "a", Move::Left);
  m.set_rule("q_x1w", "1", "q_acc", "1", Move::Stay);
  m.set_rule("q_b1", "a", "q_b1", "a", Move::Left);
  m.set_rule("q_b1", "b", "q_b1", "b", Move::Left);
  m.set_rule("q_b1", "#", "q_b2", "#", Move::Left);
  m.set_rule("q_b2", "0", "q_b2", "0", Move::Left);
  m.set_rule("q_b2", "1", "q_b2", "1", Move::Left);
  m.set_rule("q_b2", "a", "q_rd", "a", Move::Right);
  m.set_rule("q_b2", "b", "q_rd", "b", Move::Right);
  m.set_rule("q_b2", ">", "q_rd", ">", Move::Right);
  return m;
}

// Verifier for "o ends in 1"; the witness is ignored.
TuringMachine ends_in_one_standalone_verifier() {
  TuringMachine m;
  for (const char* s : {"q0", "q_seek", "q_last", "q_acc", "q_rej"}) m.add_state(s);
  for (const char* a : {">", "0", "1", "#"}) m.add_symbol(a);
  m.blank = m.symbol_id("#");
  m.set_rule("q0", ">", "q_seek", ">", Move::Right);
  m.set_rule("q_seek", "0", "q_seek", "0", Move::Right);
  m.set_rule("q_seek", "1", "q_seek", "1", Move::Right);
  m.set_rule("q_seek", "#", "q_last", "#", Move::Left);
  m.set_rule("q_last", "1", "q_acc", "1", Move::Stay);
  m.set_rule("q_last", "0", "q_rej", "0", Move::Stay);
  m.set_rule("q_last", ">", "q_rej", ">", Move::Stay);
  return m;
}

OracleMachine bit_machine(int variant) {
  // variant 1: one query o1 = x, output z1.
  // variant 2: o1 = x, o2 = !z1, output z2.
  // variant 3: o1 = x, o2 = z1, output 2*z1 + z2.
  // variant 4: o1 = x, output 1 - z1.
  OracleMachine om;
  TuringMachine& m = om.tm;
  m.add_state("ask0");
  for (const char* a : {"0", "1", "#"}) m.add_symbol(a);
  m.blank = m.symbol_id("#");
  om.sym0 = m.symbol_id("0");
  om.sym1 = m.symbol_id("1");
  int read0 = m.add_state("read0");
  om.ask_resume[m.state_id("ask0")] = read0;
  switch (variant) {
    case 1: {
      int done = m.add_state("done");
      m.set_rule("read0", "0", "done", "0", Move::Stay);
      m.set_rule("read0", "1", "done", "1", Move::Stay);
      om.done_state = done;
      break;
    }
    case 2: {
      int read1 = m.add_state("read1");
      om.ask_resume[m.add_state("ask1")] = read1;
      int done = m.add_state("done");
      m.set_rule("read0", "0", "ask1", "1", Move::Stay);  // query the negated answer
      m.set_rule("read0", "1", "ask1", "0", Move::Stay);
      m.set_rule("read1", "0", "done", "0", Move::Stay);
      m.set_rule("read1", "1", "done", "1", Move::Stay);
      om.done_state = done;
      break;
    }
    case 3: {
      int read1 = m.add_state("read1");
      om.ask_resume[m.add_state("ask1")] = read1;
      int done = m.add_state("done");
      m.set_rule("read0", "0", "w0", "0", Move::Right);
      m.set_rule("read0", "1", "w1", "1", Move::Right);
      m.set_rule("w0", "#", "ask1", "0", Move::Stay);  // second query copies the answer
      m.set_rule("w1", "#", "ask1", "1", Move::Stay);
      m.set_rule("read1", "0", "done", "0", Move::Left);
      m.set_rule("read1", "1", "done", "1", Move::Left);
      om.done_state = done;
      break;
    }
    case 4: {
      int done = m.add_state("done");
      m.set_rule("read0", "0", "done", "1", Move::Stay);
      m.set_rule("read0", "1", "done", "0", Move::Stay);
      om.done_state = done;
      break;
    }
    default:
      fail(errc::usage, "no such toy machine");
  }
  return om;
}

}  // namespace

OracleProblem toy_problem(int index) {
  OracleProblem p;
  bool contains = index == 1 || index == 2;
  p.nbar = (index == 2 || index == 3) ? 2 : 1;
  p.witness_len = contains ? 4 : 1;
  p.machine_m = bit_machine(index);
  p.verifier_v = contains ? contains_one_verifier() : ends_in_one_standalone_verifier();
  for (const char* name : {"0", "1", "00", "01", "10", "11", "000", "001", "010", "011", "100",
                            "101", "110", "111"}) {
    std::string o = name;
    bool member = contains ? o.find('1') != std::string::npos : o.back() == '1';
    p.membership[o] = member;
  }
  return p;
}

bool verifier_accepts(const OracleProblem& p, const std::string& o, const std::string& witness) {
  const TuringMachine& tm = p.verifier_v;
  int s_start = tm.symbol_id(">");
  int s0 = tm.symbol_id("0"), s1 = tm.symbol_id("1"), sep = tm.symbol_id("#");
  int acc = tm.state_id("q_acc"), rej = tm.state_id("q_rej");
  TmConfiguration cfg;
  cfg.tape.push_back(s_start);
  for (char c : o) cfg.tape.push_back(c == '1' ? s1 : s0);
  cfg.tape.push_back(sep);
  for (char c : witness) cfg.tape.push_back(c == '1' ? s1 : s0);
  cfg.tape.push_back(sep);
  cfg.head = 0;
  cfg.state = 0;
  for (int step = 0; step < 100000; ++step) {
    if (cfg.state == acc) return true;
    if (cfg.state == rej) return false;
    auto next = tm_step(tm, cfg);
    if (!next) return false;
    cfg = *next;
  }
  return false;
}

bool verifier_value(const OracleProblem& p, const std::string& o) {
  auto it = p.verifier_cache.find(o);
  if (it != p.verifier_cache.end()) return it->second != 0;
  bool ok = false;
  std::string w(p.witness_len, '0');
  for (int mask = 0; mask < (1 << p.witness_len) && !ok; ++mask) {
    for (int i = 0; i < p.witness_len; ++i) w[i] = (mask >> i) & 1 ? '1' : '0';
    ok = verifier_accepts(p, o, w);
  }
  p.verifier_cache[o] = ok ? 1 : 0;
  return ok;
}

// --- Krentel accounting ----------------------------------------------------------

long long check_k(const std::vector<int>& z, int nbar, int k) {
  if (k < 1 || k > nbar) fail(errc::usage, "bit index out of range");
  long long scale = 1LL << (nbar + 5);
  long long inner = z[k - 1] ? (1LL << nbar) : (1LL << (nbar - k));
  return scale * inner;
}

long long check_sum(const std::vector<int>& z, int nbar) {
  long long s = 0;
  for (int k = 1; k <= nbar; ++k) s += check_k(z, nbar, k);
  return s;
}

KrentelResult krentel_cost(const OracleProblem& p, const std::string& x,
                           const std::vector<int>& z) {
  if (int(z.size()) < p.nbar) fail(errc::usage, "response string shorter than the query budget");
  OracleRun run = run_oracle_machine(p.machine_m, x, z);
  if (!run.completed || int(run.queries.size()) != p.nbar)
    fail(errc::precondition, "oracle machine did not complete with the declared query count");
  KrentelResult kr;
  kr.queries = run.queries;
  kr.f_value = run.output;
  for (int j = 1; j <= p.nbar; ++j) {
    int v = verifier_value(p, run.queries[j - 1]) ? 1 : 0;
    kr.verifier_bits.push_back(v);
    if (z[j - 1]) {
      kr.c_value += (1LL - v) * (1LL << p.nbar);
    } else {
      kr.c_value += 1LL << (p.nbar - j);
    }
  }
  kr.target_total = (1LL << (p.nbar + 5)) * kr.c_value + 8 * kr.f_value;
  return kr;
}

std::vector<int> correct_responses(const OracleProblem& p, const std::string& x) {
  std::vector<int> z;
  for (int j = 0; j < p.nbar; ++j) {
    OracleRun run = run_oracle_machine(p.machine_m, x, z);
    if (int(run.queries.size()) != j + 1)
      fail(errc::precondition, "oracle machine asked an unexpected number of queries");
    const std::string& o = run.queries.back();
    auto it = p.membership.find(o);
    if (it == p.membership.end()) fail(errc::precondition, "membership table misses query " + o);
    z.push_back(it->second ? 1 : 0);
  }
  return z;
}

Role interval_role(long long size_r, long long mu_n, const std::vector<int>& z, long long f_value,
                   int nbar) {
  if (size_r < 2) fail(errc::usage, "interval size must be at least 2");
  long long I = mu_n + 2 - size_r;
  if (I <= 0) return {Role::Accept, 0};
  long long acc = 0;
  for (int k = 1; k <= nbar; ++k) {
    acc += check_k(z, nbar, k);
    if (I <= acc) return {Role::CheckBit, k};
  }
  if (I <= acc + 8 * f_value) return {Role::Reject, 0};
  return {Role::Accept, 0};
}

long long strip_role_cost(const OracleProblem& p, const KrentelResult& kr,
                          const std::vector<int>& z, long long size_r, long long mu_n,
                          long long weight) {
  Role role = interval_role(size_r, mu_n, z, kr.f_value, p.nbar);
  switch (role.kind) {
    case Role::Accept:
      return 0;
    case Role::Reject:
      return weight;
    case Role::CheckBit: {
      if (!z[role.k - 1]) return weight;  // a zero guess rejects outright
      return kr.verifier_bits[role.k - 1] ? 0 : weight;
    }
  }
  return 0;
}

long long fwt_strip_total(const OracleProblem& p, const std::string& x, const std::vector<int>& z,
                          const std::vector<long long>& sizes, long long mu_n) {
  KrentelResult kr = krentel_cost(p, x, z);
  long long total = 0;
  for (long long s : sizes)
    if (s >= 2) total += strip_role_cost(p, kr, z, s, mu_n, 1);
  return total;
}

long long pwt_strip_total(const OracleProblem& p, const std::string& x, const std::vector<int>& z,
                          const std::vector<long long>& sizes, long long mu_n) {
  KrentelResult kr = krentel_cost(p, x, z);
  long long total = (kr.f_value & 1) ? 1 : 0;  // leftmost strip: decision bit
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] >= 2) total += strip_role_cost(p, kr, z, sizes[i], mu_n, 2);
  return total;
}

std::vector<long long> ideal_sizes(long long m) {
  std::vector<long long> out;
  for (long long s = m + 1; s >= 2; --s) out.push_back(s);
  return out;
}

// --- consensus machine -----------------------------------------------------------

const TuringMachine& consensus_machine() {
  using namespace consensus;
  static const TuringMachine tm = [] {
    TuringMachine m;
    for (const char* s : {"q_findS", "q_read", "q_1_0", "q_1_1", "q_1_2", "q_1_3", "q_2_0",
                          "q_2_1", "q_2_2", "q_2_3", "q_ret", "q_sweep", "q_clear"})
      m.add_state(s);
    for (const char* a : {"\xE2\x8A\xB2", "\xE2\x8A\xB3", "X", "0", "1", "2", "3", "0m", "1m",
                          "2m", "3m", "B", "S", "T", "+", "#"})
      m.add_symbol(a);
    m.blank = Blank;
    m.direction = TmDirection::Up;
    auto R = Move::Right;
    auto L = Move::Left;
    const int others[4] = {B, T, Plus, X};

    // q_clear: sweep left unmarking until the left end.
    for (int d = 0; d < 4; ++d) {
      m.set_rule(QClear, D0 + d, QClear, D0 + d, L);
      m.set_rule(QClear, M0 + d, QClear, D0 + d, L);
    }
    m.set_rule(QClear, S, QClear, S, L);
    m.set_rule(QClear, REnd, QClear, REnd, L);
    for (int c : others) m.set_rule(QClear, c, QClear, c, L);
    m.set_rule(QClear, LEnd, QFindS, LEnd, R);

    // q_findS: right to the first S.
    for (int d = 0; d < 4; ++d) {
      m.set_rule(QFindS, D0 + d, QFindS, D0 + d, R);
      m.set_rule(QFindS, M0 + d, QFindS, M0 + d, R);
    }
    m.set_rule(QFindS, LEnd, QFindS, LEnd, R);
    for (int c : others) m.set_rule(QFindS, c, QFindS, c, R);
    m.set_rule(QFindS, S, QRead, S, R);
    m.set_rule(QFindS, REnd, QClear, REnd, L);

    // q_read: skip marked digits; mark and remember the first unmarked one.
    for (int d = 0; d < 4; ++d) {
      m.set_rule(QRead, D0 + d, Q1_0 + d, M0 + d, R);
      m.set_rule(QRead, M0 + d, QRead, M0 + d, R);
    }
    m.set_rule(QRead, S, QSweep, S, R);
    for (int c : others) m.set_rule(QRead, c, QSweep, c, R);
    m.set_rule(QRead, REnd, QClear, REnd, L);
    m.set_rule(QRead, LEnd, QRead, LEnd, R);

    for (int j = 0; j < 4; ++j) {
      int q1 = Q1_0 + j, q2 = Q2_0 + j;
      // q_1j: right to the next S.
      for (int d = 0; d < 4; ++d) {
        m.set_rule(q1, D0 + d, q1, D0 + d, R);
        m.set_rule(q1, M0 + d, q1, M0 + d, R);
      }
      for (int c : others) m.set_rule(q1, c, q1, c, R);
      m.set_rule(q1, S, q2, S, R);
      m.set_rule(q1, LEnd, q2, LEnd, R);
      m.set_rule(q1, REnd, QRet, REnd, L);
      // q_2j: skip marked digits; check the first unmarked one.
      for (int d = 0; d < 4; ++d) {
        m.set_rule(q2, D0 + d, q1, M0 + d, R);  // verification cost when d != j
        m.set_rule(q2, M0 + d, q2, M0 + d, R);
      }
      m.set_rule(q2, S, q2, S, R);             // cost: the checked string was empty
      for (int c : others) m.set_rule(q2, c, q1, c, R);  // cost: string too short
      m.set_rule(q2, REnd, QRet, REnd, L);     // cost: last string too short
      m.set_rule(q2, LEnd, q1, LEnd, R);
    }

    // q_ret: left to the left end, then start the next inner loop.
    for (int d = 0; d < 4; ++d) {
      m.set_rule(QRet, D0 + d, QRet, D0 + d, L);
      m.set_rule(QRet, M0 + d, QRet, M0 + d, L);
    }
    m.set_rule(QRet, S, QRet, S, L);
    m.set_rule(QRet, REnd, QRet, REnd, L);
    for (int c : others) m.set_rule(QRet, c, QRet, c, L);
    m.set_rule(QRet, LEnd, QFindS, LEnd, R);

    // q_sweep: right to the right end; unmarked digits cost.
    for (int d = 0; d < 4; ++d) {
      m.set_rule(QSweep, D0 + d, QSweep, D0 + d, R);
      m.set_rule(QSweep, M0 + d, QSweep, M0 + d, R);
    }
    m.set_rule(QSweep, S, QSweep, S, R);
    m.set_rule(QSweep, LEnd, QSweep, LEnd, R);
    for (int c : others) m.set_rule(QSweep, c, QSweep, c, R);
    m.set_rule(QSweep, REnd, QClear, REnd, L);
    return m;
  }();
  return tm;
}

bool verification_head(TmTile t) {
  using namespace consensus;
  if (!t.is_head()) return false;
  if (t.state >= Q2_0 && t.state < Q2_0 + 4) {
    int j = t.state - Q2_0;
    if (is_digit(t.sym) && t.sym - D0 != j) return true;
    if (t.sym == B || t.sym == S || t.sym == T || t.sym == Plus || t.sym == X || t.sym == REnd)
      return true;
    return false;
  }
  if (t.state == QSweep && is_digit(t.sym)) return true;
  return false;
}

L3Row make_consensus_row(const std::vector<std::pair<std::string, int>>& strips) {
  using namespace consensus;
  L3Row row;
  for (size_t i = 0; i < strips.size(); ++i) {
    const auto& [digits, size] = strips[i];
    int interior = size - 2;
    if (interior < int(digits.size()) + 2)
      fail(errc::dimension, "strip too small for its digit string");
    row.cells.push_back(i == 0 ? tape_tile(LEnd) : tape_tile(X));
    row.cells.push_back(tape_tile(S));
    for (char c : digits) row.cells.push_back(tape_tile(D0 + (c - '0')));
    for (int b = int(digits.size()) + 2; b < interior; ++b) row.cells.push_back(tape_tile(B));
    row.cells.push_back(tape_tile(T));
  }
  row.cells.push_back(head_tile(QRet, REnd));
  return row;
}

bool is_l3_end_row(const L3Row& row) {
  using namespace consensus;
  for (const TmTile& t : row.cells)
    if (t.is_head())
      return t.sym == REnd &&
             (t.state == QSweep || t.state == QRead || t.state == QFindS || t.state == QClear);
  return false;
}

namespace {

// One step of a machine for the unique head of an interior row.
bool row_step(const TuringMachine& tm, std::vector<TmTile>& cells, int blank) {
  int hp = -1;
  for (int i = 0; i < int(cells.size()); ++i)
    if (cells[i].is_head()) {
      hp = i;
      break;
    }
  if (hp < 0) return false;
  TmTile h = cells[hp];
  auto out = tm.delta[h.state][h.sym];
  if (!out) return false;
  int target = out->move == Move::Left ? hp - 1 : out->move == Move::Right ? hp + 1 : hp;
  if (target < 0) return false;
  if (target >= int(cells.size())) cells.resize(target + 1, tape_tile(blank));
  if (out->move == Move::Stay) {
    cells[hp] = head_tile(out->next_state, out->write);
  } else {
    cells[hp] = tape_tile(out->write);
    cells[target] = head_tile(out->next_state, cells[target].sym);
  }
  return true;
}

}  // namespace

ConsensusRun run_consensus(const L3Row& start, int end_rows, long long max_steps) {
  const TuringMachine& tm = consensus_machine();
  ConsensusRun run;
  L3Row row = start;
  for (long long step = 0; step < max_steps; ++step) {
    for (const TmTile& t : row.cells)
      if (t.is_head() && verification_head(t)) ++run.verification_events;
    if (is_l3_end_row(row)) {
      ++run.end_rows_seen;
      if (run.end_rows_seen >= end_rows) {
        run.final_row = row;
        return run;
      }
    }
    if (!row_step(tm, row.cells, consensus::Blank))
      fail(errc::precondition, "consensus machine halted unexpectedly");
    ++run.steps;
  }
  fail(errc::capacity, "consensus run exceeded its step budget");
}

// --- GWT strip layer ---------------------------------------------------------------

const StripVerifier& ends_in_one_verifier() {
  static const StripVerifier v = [] {
    StripVerifier sv;
    TuringMachine& m = sv.tm;
    for (const char* s : {"q_s1", "q_s2", "q_scan", "q_back", "q_chk", "q_acc", "q_rej"})
      m.add_state(s);
    for (const char* a : {"S", "0", "1", "B", "T", "X", "#"}) m.add_symbol(a);
    m.blank = l2::Blank;
    m.direction = TmDirection::Up;
    sv.q_s1 = m.state_id("q_s1");
    sv.q_s2 = m.state_id("q_s2");
    sv.q_acc = m.state_id("q_acc");
    sv.q_rej = m.state_id("q_rej");
    int scan = m.state_id("q_scan"), back = m.state_id("q_back"), chk = m.state_id("q_chk");
    m.set_rule(sv.q_s2, l2::S, scan, l2::S, Move::Right);
    m.set_rule(scan, l2::D0, scan, l2::D0, Move::Right);
    m.set_rule(scan, l2::D1, scan, l2::D1, Move::Right);
    m.set_rule(scan, l2::B, back, l2::B, Move::Left);
    m.set_rule(back, l2::D0, chk, l2::D0, Move::Left);
    m.set_rule(back, l2::D1, chk, l2::D1, Move::Left);
    m.set_rule(chk, l2::D1, sv.q_acc, l2::D1, Move::Right);
    m.set_rule(chk, l2::D0, sv.q_rej, l2::D0, Move::Right);
    m.set_rule(chk, l2::S, sv.q_rej, l2::S, Move::Right);
    // Narrow strips idle on the right wall marker; halted states idle in place.
    for (int q = 0; q < m.state_count(); ++q)
      if (!m.delta[q][l2::T]) m.set_rule(q, l2::T, q, l2::T, Move::Stay);
    for (int q : {sv.q_acc, sv.q_rej})
      for (int a : {int(l2::S), int(l2::D0), int(l2::D1), int(l2::B)})
        m.set_rule(q, a, q, a, Move::Stay);
    return sv;
  }();
  return v;
}

const StageOneMachine& stage_one_machine() {
  static const StageOneMachine sm = [] {
    StageOneMachine s;
    TuringMachine& m = s.tm;
    for (const char* st : {"q_s", "q_ext", "q_ret", "q_inc", "q_done"}) m.add_state(st);
    for (const char* a : {"S", "0", "1", "B", "T", "X", "#"}) m.add_symbol(a);
    m.blank = l2::Blank;
    m.direction = TmDirection::Up;
    int qs = m.state_id("q_s"), ext = m.state_id("q_ext"), ret = m.state_id("q_ret");
    int inc = m.state_id("q_inc");
    s.q_done = m.state_id("q_done");
    m.set_rule(qs, l2::S, ext, l2::S, Move::Right);
    m.set_rule(ext, l2::D0, ext, l2::D0, Move::Right);
    m.set_rule(ext, l2::D1, ext, l2::D1, Move::Right);
    m.set_rule(ext, l2::B, ret, l2::D0, Move::Left);  // extend with a fresh high-order 0
    m.set_rule(ext, l2::T, s.q_done, l2::T, Move::Stay);
    m.set_rule(ret, l2::D0, ret, l2::D0, Move::Left);
    m.set_rule(ret, l2::D1, ret, l2::D1, Move::Left);
    m.set_rule(ret, l2::S, inc, l2::S, Move::Right);
    m.set_rule(inc, l2::D0, ext, l2::D1, Move::Right);  // add one, LSB at the left
    m.set_rule(inc, l2::D1, inc, l2::D0, Move::Right);  // carry
    m.set_rule(s.q_done, l2::T, s.q_done, l2::T, Move::Stay);
    return s;
  }();
  return sm;
}

long long run_stage_one(int k, long long max_steps) {
  const StageOneMachine& sm = stage_one_machine();
  TmConfiguration cfg;
  cfg.tape.push_back(l2::S);
  for (int i = 0; i < k; ++i) cfg.tape.push_back(l2::B);
  cfg.tape.push_back(l2::T);
  cfg.head = 0;
  cfg.state = 0;
  for (long long step = 0; step < max_steps; ++step) {
    if (cfg.state == sm.q_done) break;
    auto next = tm_step(sm.tm, cfg);
    if (!next) fail(errc::precondition, "stage-one machine halted unexpectedly");
    cfg = *next;
  }
  if (cfg.state != sm.q_done) fail(errc::capacity, "stage-one run exceeded its step budget");
  long long value = 0;
  for (int i = int(cfg.tape.size()) - 1; i >= 1; --i) {
    int s = cfg.tape[i];
    if (s == l2::D0 || s == l2::D1) value = value * 2 + (s == l2::D1 ? 1 : 0);
  }
  return value;
}

StripRun run_verifier_strip(const StripVerifier& v, const std::string& bits, int interior,
                            long long steps) {
  if (interior < int(bits.size()) + 1) fail(errc::dimension, "strip too small for its contents");
  StripRun out;
  std::vector<TmTile> cells;
  cells.push_back(tape_tile(l2::X));
  cells.push_back(head_tile(v.q_s2, l2::S));
  for (char c : bits) cells.push_back(tape_tile(c == '1' ? l2::D1 : l2::D0));
  for (int i = int(bits.size()) + 2; i < interior; ++i) cells.push_back(tape_tile(l2::B));
  cells.push_back(tape_tile(l2::T));
  cells.push_back(tape_tile(l2::X));

  int prev_state = v.q_s2;
  for (long long s = 0; s < steps; ++s) {
    int hp = -1;
    for (int i = 0; i < int(cells.size()); ++i)
      if (cells[i].is_head()) hp = i;
    if (hp < 0) break;
    TmTile h = cells[hp];
    if (h.sym == l2::T) out.stuck = true;
    auto rule = v.tm.delta[h.state][h.sym];
    if (!rule) break;
    if (rule->move == Move::Stay && rule->next_state == h.state && rule->write == h.sym) {
      prev_state = h.state;
      break;  // idling from here on
    }
    int target = rule->move == Move::Left ? hp - 1 : rule->move == Move::Right ? hp + 1 : hp;
    if (target <= 0 || target >= int(cells.size()) - 1) break;
    if (rule->move == Move::Stay) {
      cells[hp] = head_tile(rule->next_state, rule->write);
    } else {
      cells[hp] = tape_tile(rule->write);
      cells[target] = head_tile(rule->next_state, cells[target].sym);
    }
    if (rule->next_state == v.q_rej && h.state != v.q_rej) ++out.rejecting_squares;
    prev_state = rule->next_state;
  }
  (void)prev_state;
  for (const TmTile& t : cells)
    if (t.is_head() && t.state == v.q_acc) out.accepted = true;
  return out;
}

// --- composite grids ------------------------------------------------------------------

namespace {

// Layer 2 -> Layer 3 per-column translation (GWT): heads lose their state and
// become q_s1 on T, q_s2 otherwise; tape tiles pass through, except that
// blank working cells may carry witness bits.
bool gwt_translation_ok(TmTile from, TmTile to, const StripVerifier& v) {
  if (from.is_head()) {
    if (!to.is_head()) return false;
    if (from.sym == l2::T) return to.state == v.q_s1 && to.sym == l2::T;
    return to.state == v.q_s2 && to.sym == from.sym;
  }
  if (to.is_head()) return false;
  if (from.sym == l2::B) return to.sym == l2::B || to.sym == l2::D0 || to.sym == l2::D1;
  return to.sym == from.sym;
}

const TmSquareRules& counter_square_rules() {
  static const TmSquareRules rules(l2::binary_counter_machine(), l2::counter_head_symbols());
  return rules;
}

}  // namespace

MultiGrid build_gwt_grid(int n, const StripVerifier& verifier) {
  MultiGrid g;
  g.n = n;
  g.model.variant = Variant::GWT;
  g.verifier = &verifier;
  g.cells.assign(size_t(n) * n, MultiTile{});

  auto l1rows = l1::simulate_layer1(n);
  l2::Row l2first = l2::translate_l1_to_l2(l1rows.back());
  auto l2res = l2::simulate_layer2(l2first, n, nullptr, true);

  // Layer 3 first row: translate the last counter row (grid row 1).
  std::vector<std::vector<TmTile>> l3rows(n - 1);  // index by grid row, 1..n-2
  {
    std::vector<TmTile>& first = l3rows[1];
    const l2::Row& src = l2res.rows.back();
    first.resize(src.prefix_len(), tape_tile(l2::Blank));
    for (int i = 0; i < src.prefix_len(); ++i) {
      TmTile t = src.cells[i];
      if (t.is_head()) {
        first[i] = t.sym == l2::T ? head_tile(verifier.q_s1, l2::T)
                                  : head_tile(verifier.q_s2, t.sym);
      } else {
        first[i] = t;
      }
    }
  }
  // Strips advance independently upward.
  {
    std::vector<int> walls;
    const std::vector<TmTile>& first = l3rows[1];
    for (int i = 0; i < int(first.size()); ++i)
      if (!first[i].is_head() && first[i].sym == l2::X) walls.push_back(i);
    for (int r = 2; r <= n - 2; ++r) {
      l3rows[r] = l3rows[r - 1];
      for (size_t wi = 0; wi + 1 < walls.size(); ++wi) {
        int a = walls[wi], b = walls[wi + 1];
        int hp = -1;
        for (int i = a + 1; i < b; ++i)
          if (l3rows[r][i].is_head()) hp = i;
        if (hp < 0) continue;
        TmTile h = l3rows[r][hp];
        auto rule = verifier.tm.delta[h.state][h.sym];
        if (!rule) continue;
        int target = rule->move == Move::Left ? hp - 1 : rule->move == Move::Right ? hp + 1 : hp;
        if (target <= a || target >= b) continue;
        if (rule->move == Move::Stay) {
          l3rows[r][hp] = head_tile(rule->next_state, rule->write);
        } else {
          l3rows[r][hp] = tape_tile(rule->write);
          l3rows[r][target] = head_tile(rule->next_state, l3rows[r][target].sym);
        }
      }
    }
  }

  // Assemble: interior tiles carry one sub-tile per layer; the ring carries
  // the canonical directed border types.
  for (int r = 1; r <= n - 2; ++r) {
    const l1::Row& a = l1rows[r - 1];
    const l2::Row& b = l2res.rows[size_t(n - 2 - r)];
    const std::vector<TmTile>& c = l3rows[r];
    for (int col = 1; col <= n - 2; ++col) {
      MultiTile& t = g.at(r, col);
      t.border = -1;
      t.t1 = a.cell(col - 1);
      t.t2 = b.cell(col - 1);
      t.t3 = col - 1 < int(c.size()) ? c[col - 1] : tape_tile(l2::Blank);
    }
  }
  // Canonical perimeter: SW on the left edge, SE on the bottom, NW on the
  // top, NE on the right.
  for (int r = 0; r + 1 < n; ++r) g.at(r, 0).border = 3;
  for (int col = 1; col < n; ++col) g.at(0, col).border = 2;
  for (int col = 0; col + 1 < n; ++col) g.at(n - 1, col).border = 0;
  for (int r = 1; r < n; ++r) g.at(r, n - 1).border = 1;
  return g;
}

CompositeCost evaluate_composite(const MultiGrid& g) {
  if (!g.verifier) fail(errc::precondition, "composite grid lacks a strip machine");
  const int n = g.n;
  const TmSquareRules l3_rules(g.verifier->tm, l2::counter_head_symbols());
  CompositeCost out;

  auto l1_of = [](const MultiTile& t) { return t.t1; };
  auto is_border = [](const MultiTile& t) { return t.border >= 0; };

  for (int r = 0; r + 1 < n; ++r) {
    for (int c = 0; c + 1 < n; ++c) {
      const MultiTile& bl = g.at(r, c);
      const MultiTile& br = g.at(r, c + 1);
      const MultiTile& tl = g.at(r + 1, c);
      const MultiTile& tr = g.at(r + 1, c + 1);

      int p1 = 0, f1 = 0, f2 = 0, f3 = 0, rej = 0;

      // Layer 1 horizontal pair under the square.
      {
        bool ok;
        if (is_border(bl) && is_border(br)) {
          ok = true;
        } else if (is_border(bl)) {
          ok = l1::legal_pair_border_left(l1_of(br));
        } else if (is_border(br)) {
          ok = l1::legal_pair_border_right(l1_of(bl));
        } else {
          ok = l1::legal_pair(l1_of(bl), l1_of(br));
        }
        p1 = ok ? 0 : 1;
      }

      bool bottom_border = is_border(bl) && is_border(br);
      bool top_border = is_border(tl) && is_border(tr);

      if (bottom_border && !top_border && r == 0) {
        // Initialization squares for Layer 1 and translation squares from
        // Layer 2 to Layer 3.
        auto wrap1 = [&](const MultiTile& t) {
          return is_border(t) ? std::optional<l1::Tile>() : std::optional<l1::Tile>(t.t1);
        };
        f1 = l1::init_pair_ok(wrap1(tl), wrap1(tr)) ? 0 : 1;
        bool trans_ok = true;
        if (!is_border(tl)) trans_ok &= gwt_translation_ok(tl.t2, tl.t3, *g.verifier);
        if (!is_border(tr)) trans_ok &= gwt_translation_ok(tr.t2, tr.t3, *g.verifier);
        f3 = trans_ok ? 0 : 1;
      } else if (top_border && !bottom_border && r == n - 2) {
        // Translation from Layer 1 to Layer 2 plus the Layer-2 start row.
        bool ok = true;
        if (!is_border(bl)) ok &= l2::translation_ok_column(bl.t1, bl.t2);
        if (!is_border(br)) ok &= l2::translation_ok_column(br.t1, br.t2);
        const TmTile* left = is_border(bl) ? nullptr : &bl.t2;
        const TmTile* right = is_border(br) ? nullptr : &br.t2;
        ok &= l2::first_row_pair_ok(left, right);
        f2 = ok ? 0 : 1;
      } else if (!bottom_border || !top_border) {
        auto wrap1 = [&](const MultiTile& t) {
          return is_border(t) ? std::optional<l1::Tile>() : std::optional<l1::Tile>(t.t1);
        };
        f1 = l1::legal_square(wrap1(bl), wrap1(br), wrap1(tl), wrap1(tr)) ? 0 : 1;
        auto wrap2 = [&](const MultiTile& t) { return is_border(t) ? kWallTile : t.t2; };
        f2 = counter_square_rules().legal(wrap2(bl), wrap2(br), wrap2(tl), wrap2(tr)) ? 0 : 1;
        auto wrap3 = [&](const MultiTile& t) { return is_border(t) ? kWallTile : t.t3; };
        f3 = l3_rules.legal(wrap3(bl), wrap3(br), wrap3(tl), wrap3(tr)) ? 0 : 1;
        rej = l3_rules.enters_state(wrap3(bl), wrap3(br), wrap3(tl), wrap3(tr), g.verifier->q_rej)
                  ? 1
                  : 0;
      }

      long long adj = 0;
      auto corner = [&](const MultiTile& t, ti::SquareCorner sc) {
        if (t.border >= 0) adj += ti::border_adjustment(t.border, sc, g.model.border_benefit);
      };
      corner(tl, ti::SquareCorner::UpperLeft);
      corner(tr, ti::SquareCorner::UpperRight);
      corner(bl, ti::SquareCorner::LowerLeft);
      corner(br, ti::SquareCorner::LowerRight);

      out.P1 += p1;
      out.F1 += f1;
      out.F2 += f2;
      out.F3 += f3;
      out.R += rej;
      out.border_adjust += adj;
      out.total += g.model.square_cost(p1, f1, f2, 0, f3, 0, rej) + adj;
    }
  }
  return out;
}

}  // namespace ti::l34
