#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ti/layer1.hpp"
#include "ti/layer2.hpp"
#include "ti/tm.hpp"

namespace ti::l34 {

// --- base-4 digit strings --------------------------------------------------

// First/second-bit projections of a digit string over {0,1,2,3}.
std::string f1_bits(const std::string& digits);
std::string f2_bits(const std::string& digits);

// --- cost models -----------------------------------------------------------

enum class Variant { GWT, FWT, PWT };

struct CostModel {
  Variant variant = Variant::GWT;
  long long border_benefit = 21;

  long long rejection_weight(bool leftmost_strip = false) const {
    switch (variant) {
      case Variant::GWT:
      case Variant::FWT:
        return 1;
      case Variant::PWT:
        return leftmost_strip ? 1 : 2;
    }
    return 1;
  }

  // p1/p3: illegal pairs under the square; f_i: illegal squares per layer;
  // r: rejecting squares.
  long long square_cost(int p1, int f1, int f2, int p3, int f3, int f4, int r,
                        bool leftmost_strip = false) const {
    switch (variant) {
      case Variant::GWT:
        return p1 + f1 + f2 + f3 + r;
      case Variant::FWT:
        return r + 48LL * (f1 + p1) + 5LL * (f2 + p3 + f3 + f4);
      case Variant::PWT:
        return rejection_weight(leftmost_strip) * r + 96LL * (f1 + p1) +
               10LL * (f2 + p3 + f3 + f4);
    }
    return 0;
  }

  long long min_fault_weight() const {
    switch (variant) {
      case Variant::GWT:
        return 1;
      case Variant::FWT:
        return 5;
      case Variant::PWT:
        return 10;
    }
    return 1;
  }
};

// --- oracle problems ----------------------------------------------------------

struct OracleProblem {
  int nbar = 1;
  int witness_len = 1;
  OracleMachine machine_m;
  TuringMachine verifier_v;  // standalone convention: tape "> o # w #"
  std::map<std::string, bool> membership;          // ground truth, audits only
  std::map<std::string, long long> f_table;       // optional audit table, key "x|z"
  mutable std::unordered_map<std::string, int> verifier_cache;
};

OracleProblem problem_from_json(const std::string& text);
std::string problem_to_json(const OracleProblem& p);

// Built-in toy problems 1..4 (one or two adaptive oracle queries against a
// small verifier-checked language).
OracleProblem toy_problem(int index);

// Verifier on query o with an explicit witness; and with the best witness
// (exhaustive over witness_len bits, memoized).
bool verifier_accepts(const OracleProblem& p, const std::string& o, const std::string& witness);
bool verifier_value(const OracleProblem& p, const std::string& o);

// --- Krentel accounting ----------------------------------------------------------

long long check_k(const std::vector<int>& z, int nbar, int k);  // k is 1-based
long long check_sum(const std::vector<int>& z, int nbar);

struct KrentelResult {
  long long c_value = 0;
  long long f_value = 0;
  long long target_total = 0;  // 2^(nbar+5) * C + 8 * f
  std::vector<std::string> queries;
  std::vector<int> verifier_bits;  // V(o_j) for each query
};

KrentelResult krentel_cost(const OracleProblem& p, const std::string& x,
                           const std::vector<int>& z);

// Correct oracle responses via the membership table (adaptively).
std::vector<int> correct_responses(const OracleProblem& p, const std::string& x);

struct Role {
  enum Kind { Accept, Reject, CheckBit } kind = Accept;
  int k = 0;  // 1-based bit index for CheckBit
};

Role interval_role(long long size_r, long long mu_n, const std::vector<int>& z, long long f_value,
                   int nbar);

// Cost of one strip under its role; CheckBit strips run the verifier on the
// derived query with the best witness.
long long strip_role_cost(const OracleProblem& p, const KrentelResult& kr,
                          const std::vector<int>& z, long long size_r, long long mu_n,
                          long long weight);

// Strip-level totals over a final-row size sequence.
long long fwt_strip_total(const OracleProblem& p, const std::string& x, const std::vector<int>& z,
                          const std::vector<long long>& sizes, long long mu_n);
// PWT: the leftmost strip simulates the decision machine (accepts iff
// f(x,z) is odd) at weight 1; all other strips pay doubled role costs.
long long pwt_strip_total(const OracleProblem& p, const std::string& x, const std::vector<int>& z,
                          const std::vector<long long>& sizes, long long mu_n);

// Fault-free final-row size sequence for a run with m intervals ending on an
// end row: (m+1, m, ..., 2).
std::vector<long long> ideal_sizes(long long m);

// An interval count large enough to host every check range and the reject
// block for any response string of the problem.
inline long long strip_budget_mu(const OracleProblem& p) {
  return p.nbar * (1LL << (2 * p.nbar + 5)) + 8 * (1LL << p.nbar) + 8;
}

// --- consensus machine (global Layer 3) ------------------------------------------

namespace consensus {
enum Sym : uint8_t {
  LEnd = 0,
  REnd = 1,
  X = 2,
  D0 = 3,
  D1 = 4,
  D2 = 5,
  D3 = 6,
  M0 = 7,
  M1 = 8,
  M2 = 9,
  M3 = 10,
  B = 11,
  S = 12,
  T = 13,
  Plus = 14,
  Blank = 15
};
enum State : uint8_t {
  QFindS = 0,
  QRead = 1,
  Q1_0 = 2,  // Q1_j = 2 + j
  Q2_0 = 6,  // Q2_j = 6 + j
  QRet = 10,
  QSweep = 11,
  QClear = 12
};

inline bool is_digit(int s) { return s >= D0 && s <= D3; }
inline bool is_marked(int s) { return s >= M0 && s <= M3; }
}  // namespace consensus

const TuringMachine& consensus_machine();

// Head tiles that incur a verification cost: (q_2j / k) with unmarked k != j,
// (q_2j / c) for c in {B,S,T,+,X,REnd}, and (q_sweep / unmarked digit).
bool verification_head(TmTile t);

struct L3Row {
  std::vector<TmTile> cells;
  TmTile cell(int i) const {
    return i < int(cells.size()) ? cells[i] : tape_tile(consensus::Blank);
  }
};

// Builds an interior row "< S y1 pad T X S y2 pad T X ... (q_ret/>)" from the
// given digit strings and interval sizes (size counts both delimiters).
L3Row make_consensus_row(const std::vector<std::pair<std::string, int>>& strips);

struct ConsensusRun {
  long long steps = 0;
  long long verification_events = 0;  // rows whose head is a verification head
  int end_rows_seen = 0;
  L3Row final_row;
};

// Runs the machine until `end_rows` end rows were reached (or the step budget
// runs out).
ConsensusRun run_consensus(const L3Row& start, int end_rows, long long max_steps = 2'000'000);

bool is_l3_end_row(const L3Row& row);

// --- GWT strip layer ----------------------------------------------------------------

// A per-strip machine over the counter alphabet {S,0,1,B,T,X,#}: q_s1 idles
// on T, q_s2 starts the verifier, q_acc/q_rej idle, every state idles on T.
struct StripVerifier {
  TuringMachine tm;
  int q_s1 = -1, q_s2 = -1, q_acc = -1, q_rej = -1;
};

// Accepts iff the digit string before the trailing bit ends in 1.
const StripVerifier& ends_in_one_verifier();

// Stage-1 size-measuring shuttle: writes the number of interior cells in
// binary (LSB first, after the S) and parks on the right wall.
struct StageOneMachine {
  TuringMachine tm;
  int q_done = -1;
};
const StageOneMachine& stage_one_machine();

// Runs stage one in a strip S B^k T and returns the measured value.
long long run_stage_one(int k, long long max_steps = 1'000'000);

// Simulates a verifier strip X (q_s2/S) bits B* T X of the given interior
// width for `steps` steps; returns the number of rejecting squares (entries
// into q_rej) and whether q_acc was reached.
struct StripRun {
  long long rejecting_squares = 0;
  bool accepted = false;
  bool stuck = false;  // head reached the T wall
};
StripRun run_verifier_strip(const StripVerifier& v, const std::string& bits, int interior,
                            long long steps);

// --- composite grids -------------------------------------------------------------------

struct MultiTile {
  int border = -1;  // 0..3 = NW,NE,SE,SW; -1 = interior
  l1::Tile t1;
  TmTile t2;  // counter layer
  TmTile t3;  // strip layer (GWT)
};

struct MultiGrid {
  int n = 0;
  CostModel model;
  std::vector<MultiTile> cells;
  const StripVerifier* verifier = nullptr;

  MultiTile& at(int r, int c) { return cells[size_t(r) * n + c]; }
  const MultiTile& at(int r, int c) const { return cells[size_t(r) * n + c]; }
};

// Fault-free three-layer tiling with the canonical border assignment; the
// verifier runs in every live strip (GWT).
MultiGrid build_gwt_grid(int n, const StripVerifier& verifier);

struct CompositeCost {
  long long total = 0;
  long long border_adjust = 0;
  long long P1 = 0, F1 = 0, F2 = 0, F3 = 0, R = 0;
};

CompositeCost evaluate_composite(const MultiGrid& g);

}  // namespace ti::l34
