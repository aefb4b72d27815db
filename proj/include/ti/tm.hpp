#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ti/common.hpp"

namespace ti {

enum class Move : uint8_t { Left, Right, Stay };
enum class TmDirection : uint8_t { Up, Down };

struct TmOutcome {
  int next_state;
  int write;
  Move move;
  bool operator==(const TmOutcome&) const = default;
};

// Single-tape machine with a partial transition function; an undefined
// (state, symbol) combination halts. Weights are the optional 0/1 weighting
// of symbols and states used by interval accounting.
struct TuringMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  int blank = -1;
  TmDirection direction = TmDirection::Up;
  std::vector<std::vector<std::optional<TmOutcome>>> delta;  // [state][symbol]
  std::vector<int> symbol_weight;  // empty or one 0/1 entry per symbol
  std::vector<int> state_weight;   // empty or one 0/1 entry per state

  int state_count() const { return int(states.size()); }
  int symbol_count() const { return int(alphabet.size()); }
  int state_id(const std::string& name) const;
  int symbol_id(const std::string& name) const;
  int add_state(const std::string& name);
  int add_symbol(const std::string& name);

  void set_rule(int state, int read, int next, int write, Move m);
  void set_rule(const std::string& state, const std::string& read, const std::string& next,
                const std::string& write, Move m);
  const std::optional<TmOutcome>& rule(int state, int read) const { return delta[state][read]; }

  // True when every state is the target of rules with at most one move
  // direction.
  bool direction_unique() const;

  // Weaker condition sufficient for sound computation squares: no state is
  // reached by both left and right moves (stationary self-idles may coexist).
  bool lr_direction_unique() const;
};

struct TmConfiguration {
  std::vector<int> tape;
  int head = 0;
  int state = 0;

  int symbol_at(const TuringMachine& tm, int pos) const {
    return pos >= 0 && pos < int(tape.size()) ? tape[pos] : tm.blank;
  }
};

// One transition; nullopt when the machine halts (no applicable rule).
std::optional<TmConfiguration> tm_step(const TuringMachine& tm, const TmConfiguration& cfg);

// Splits any state reached from more than one direction into per-direction
// copies with identical outgoing rules. Step-for-step equivalent.
TuringMachine normalize_direction_uniqueness(const TuringMachine& tm);

// --- Computation squares ------------------------------------------------

// A tile within one layer: a tape symbol, or a (state, symbol) head tile, or
// the wall marker used for grid border tiles.
struct TmTile {
  int16_t sym = 0;
  int16_t state = -1;  // -1: tape tile

  bool is_head() const { return state >= 0; }
  bool operator==(const TmTile&) const = default;
};

inline TmTile tape_tile(int sym) { return TmTile{int16_t(sym), -1}; }
inline TmTile head_tile(int state, int sym) { return TmTile{int16_t(sym), int16_t(state)}; }
inline constexpr TmTile kWallTile{-2, -1};

uint64_t tm_square_key(TmTile bl, TmTile br, TmTile tl, TmTile tr);

// The set of legal computation squares for a machine, per the standard
// encoding of machine steps as 2x2 constraints. For direction Down the rows
// of every schema are swapped. `head_symbols` restricts which symbols may sit
// under a head (defaults to the full alphabet).
class TmSquareRules {
 public:
  TmSquareRules() = default;
  TmSquareRules(const TuringMachine& tm, std::vector<int> head_symbols = {});

  // bl/br are in the lower grid row, tl/tr in the upper row.
  bool legal(TmTile bl, TmTile br, TmTile tl, TmTile tr) const {
    return legal_.count(tm_square_key(bl, br, tl, tr)) != 0;
  }
  const std::unordered_set<uint64_t>& legal_set() const { return legal_; }
  // True when the square captures a move into `state` (the head tile on the
  // earlier row has a different state, the later row's head tile has it).
  bool enters_state(TmTile bl, TmTile br, TmTile tl, TmTile tr, int state) const;
  TmDirection direction() const { return direction_; }

 private:
  void add(TmTile bl, TmTile br, TmTile tl, TmTile tr);
  std::unordered_set<uint64_t> legal_;
  TmDirection direction_ = TmDirection::Up;
};

// JSON round trip per the machine file schema.
std::string tm_to_json(const TuringMachine& tm);
TuringMachine tm_from_json(const std::string& text);

// --- Oracle machines ----------------------------------------------------

// Deterministic machine that asks yes/no oracle queries. Entering an ask
// state hands the maximal 0/1 run at/right of the head to the oracle, which
// replaces the run with the answer bit; entering the done state ends the run
// with the maximal 0/1 run around the head as the output value.
struct OracleMachine {
  TuringMachine tm;
  std::unordered_map<int, int> ask_resume;  // ask state -> resume state
  int done_state = -1;
  int sym0 = -1, sym1 = -1;
};

struct OracleRun {
  std::vector<std::string> queries;  // bit strings, in ask order
  long long output = 0;              // value of the final run, MSB first
  bool completed = false;
};

// Runs `om` on input x (written at the left end of the tape) answering query
// j with responses[j]; extra queries beyond the responses halt the run.
OracleRun run_oracle_machine(const OracleMachine& om, const std::string& x,
                             const std::vector<int>& responses, long long max_steps = 200000);

std::string oracle_machine_to_json(const OracleMachine& om);
OracleMachine oracle_machine_from_json(const std::string& text);

}  // namespace ti
