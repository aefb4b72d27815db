// Command-line surface for the tiling engine: compilation, simulation,
// reduction, exact solving, fault audits, and the lemma verification suite.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ti/faultlab.hpp"
#include "ti/layer1.hpp"
#include "ti/layer2.hpp"
#include "ti/layer34.hpp"
#include "ti/solver.hpp"
#include "ti/tiles.hpp"
#include "ti/tm.hpp"

using nlohmann::json;
using namespace ti;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write " + path);
  out << text;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

long long solver_budget(long long flag_value) {
  if (const char* env = std::getenv("TI_TILE_BUDGET")) return std::atoll(env);
  return flag_value;
}

l34::OracleProblem load_problem(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return l34::toy_problem(std::atoi(spec.c_str() + 8));
  return l34::problem_from_json(slurp(spec));
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> out;
  for (char c : s) {
    if (c != '0' && c != '1') fail(errc::usage, "expected a binary string");
    out.push_back(c - '0');
  }
  return out;
}

json tm_rules_file(const TuringMachine& tm, const std::vector<int>& head_symbols) {
  TmSquareRules rules(tm, head_symbols);
  auto tile_name = [&](TmTile t) -> std::string {
    if (t == kWallTile) return "\xE2\x96\xA1";
    if (t.is_head()) return "(" + tm.states[t.state] + "/" + tm.alphabet[t.sym] + ")";
    return tm.alphabet[t.sym];
  };
  std::vector<int> heads = head_symbols;
  if (heads.empty())
    for (int i = 0; i < tm.symbol_count(); ++i) heads.push_back(i);
  json tiles = json::array();
  for (int a = 0; a < tm.symbol_count(); ++a) tiles.push_back(tm.alphabet[a]);
  for (int q = 0; q < tm.state_count(); ++q)
    for (int a : heads) tiles.push_back("(" + tm.states[q] + "/" + tm.alphabet[a] + ")");
  tiles.push_back("\xE2\x96\xA1");

  // Decode legal squares back out of the packed set, ordered for stable output.
  std::vector<uint64_t> keys(rules.legal_set().begin(), rules.legal_set().end());
  std::sort(keys.begin(), keys.end());
  json legal = json::array();
  for (uint64_t k : keys) {
    auto unpack = [&](int shift) {
      TmTile t;
      t.sym = int16_t(int8_t(uint8_t(k >> shift)));
      t.state = int16_t(int8_t(uint8_t(k >> (shift + 8))));
      return t;
    };
    TmTile bl = unpack(0), br = unpack(16), tl = unpack(32), tr = unpack(48);
    legal.push_back({tile_name(tl), tile_name(tr), tile_name(bl), tile_name(br)});
  }
  json out;
  out["direction"] = tm.direction == TmDirection::Up ? "up" : "down";
  out["tiles"] = tiles;
  out["legal_squares"] = legal;  // listed NW, NE, SW, SE
  out["illegal"] = "every other interior square pattern";
  return out;
}

json run_verify_lemmas(const std::vector<int>& ns, int seeds, int count, int threads) {
  json out = json::array();
  bool ok_all = true;
  for (int n : ns) {
    json entry;
    entry["n"] = n;
    auto rows = l1::simulate_layer1(n);
    auto rep = flab::audit(rows, n, 0);
    entry["fault_free_all_pass"] = rep.all_pass;
    entry["mu"] = rep.mu_n;
    entry["complete_segments"] = rep.complete_count;
    bool cadence = true, a_zero = true;
    {
      std::vector<int> ends;
      for (int t = 1; t <= n - 2; ++t)
        if (l1::is_end_row(rows[t - 1], n - 2)) ends.push_back(t);
      for (size_t i = 0; i + 1 < ends.size(); ++i)
        cadence = cadence &&
                  (ends[i + 1] - ends[i] == l1::x_value(rows[ends[i] - 1]) + 1);
      auto tags = l1::tag_clean_corrupt(rows, n - 2);
      for (int t : ends) {
        std::vector<long long> sizes;
        for (auto& iv : tags[t - 1])
          if (iv.clean) sizes.push_back(iv.size());
        a_zero = a_zero && l1::a_value(sizes) == 0;
      }
    }
    entry["end_row_cadence"] = cadence;
    entry["a_zero_at_end_rows"] = a_zero;
    json campaign;
    auto sum = flab::audit_campaign(n, 1, seeds, count, threads);
    campaign["runs"] = sum.runs;
    campaign["failed"] = sum.failed;
    campaign["max_f"] = sum.max_f;
    entry["campaign"] = campaign;
    ok_all = ok_all && rep.all_pass && cadence && a_zero && sum.failed == 0;
    out.push_back(entry);
  }
  json top;
  top["results"] = out;
  top["all_pass"] = ok_all;
  return top;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translationally invariant weighted tiling engine"};
  app.require_subcommand(1);
  int threads = int(std::thread::hardware_concurrency());

  // compile-tm
  auto* c_tm = app.add_subcommand("compile-tm", "compile a machine file to computation squares");
  std::string tm_path, out_path;
  c_tm->add_option("--tm", tm_path, "machine json file")->required();
  c_tm->add_option("--out", out_path, "output rules file (stdout when omitted)");

  // compile-squares
  auto* c_sq = app.add_subcommand("compile-squares", "lower square constraints to pairs");
  std::string rules_path, sq_out;
  int sq_n = 8;
  c_sq->add_option("--rules", rules_path, "rule json file")->required();
  c_sq->add_option("--out", sq_out, "output rules file (stdout when omitted)");
  c_sq->add_option("--n", sq_n, "grid side used for the penalty choice");

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "run one layer of the construction");
  int sim_layer = 1;
  long long sim_n = 16;
  bool dump_final = false, pretty = false;
  std::string sim_problem, sim_x, sim_z;
  c_sim->add_option("--layer", sim_layer, "layer to simulate (1, 2, 3, 4)")->required();
  c_sim->add_option("--n", sim_n, "grid side");
  c_sim->add_flag("--dump-final", dump_final, "include the final row in the output");
  c_sim->add_flag("--pretty", pretty, "write row art to stderr");
  c_sim->add_option("--problem", sim_problem, "problem file or builtin:K (layer 4)");
  c_sim->add_option("--x", sim_x, "input bits (layer 4)");
  c_sim->add_option("--z", sim_z, "oracle response guesses (layer 4)");

  // reduce
  auto* c_red = app.add_subcommand("reduce", "map an input string to a grid side");
  std::string red_x;
  c_red->add_option("--x", red_x, "binary input")->required();

  // mu
  auto* c_mu = app.add_subcommand("mu", "interval count of the fault-free tiling");
  long long mu_n = 0;
  c_mu->add_option("--n", mu_n, "grid side")->required();

  // solve
  auto* c_solve = app.add_subcommand("solve", "exact minimum-cost tiling");
  std::string solve_rules, witness_out;
  int solve_h = 0, solve_w = 0;
  long long budget = kDefaultStateBudget;
  bool exhaustive = false;
  c_solve->add_option("--rules", solve_rules)->required();
  c_solve->add_option("--height", solve_h)->required();
  c_solve->add_option("--width", solve_w)->required();
  c_solve->add_option("--witness", witness_out, "write the witness tiling to this file");
  c_solve->add_option("--budget", budget, "state budget");
  c_solve->add_flag("--exhaustive", exhaustive, "use full enumeration instead of dp");

  // audit / inject
  auto* c_audit = app.add_subcommand("audit", "inject faults and audit the bounds");
  auto* c_inject = app.add_subcommand("inject", "inject faults and report the perturbation");
  long long audit_n = 256;
  uint64_t audit_seed = 1;
  int audit_count = 1;
  std::string placement = "uniform";
  bool no_repair = false, audit_rows = false;
  for (auto* cmd : {c_audit, c_inject}) {
    cmd->add_option("--n", audit_n, "grid side");
    cmd->add_option("--seed", audit_seed, "rng seed");
    cmd->add_option("--count", audit_count, "number of substitutions");
    cmd->add_option("--placement", placement, "uniform | row | interval");
    cmd->add_flag("--no-repair", no_repair, "skip upward re-derivation");
    cmd->add_flag("--rows", audit_rows, "include per-row costs");
  }

  // verify-lemmas
  auto* c_verify = app.add_subcommand("verify-lemmas", "fault-free invariants plus campaigns");
  std::string n_list = "16,64,256";
  int verify_seeds = 100, verify_count = 1;
  c_verify->add_option("--n-list", n_list, "comma-separated grid sides");
  c_verify->add_option("--seeds", verify_seeds, "campaign size per grid side");
  c_verify->add_option("--count", verify_count, "substitutions per seed");
  c_verify->add_option("--threads", threads, "worker threads");

  // krentel
  auto* c_kr = app.add_subcommand("krentel", "cost accounting for a toy oracle problem");
  std::string kr_problem, kr_x, kr_z;
  c_kr->add_option("--problem", kr_problem, "problem file or builtin:K")->required();
  c_kr->add_option("--x", kr_x, "input bits")->required();
  c_kr->add_option("--z", kr_z, "oracle response guesses")->required();

  // dump-data
  auto* c_dump = app.add_subcommand("dump-data", "write the bundled machine and problem files");
  std::string dump_dir = "data";
  c_dump->add_option("--dir", dump_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_tm) {
      TuringMachine tm = tm_from_json(slurp(tm_path));
      tm = normalize_direction_uniqueness(tm);
      json j = tm_rules_file(tm, {});
      if (out_path.empty()) {
        emit(j);
      } else {
        spit(out_path, j.dump(2));
        emit(json{{"written", out_path}, {"legal_squares", j["legal_squares"].size()}});
      }
    } else if (*c_sq) {
      TileRuleSet rules = rules_from_json(slurp(rules_path));
      PairCompilation comp = compile_squares_to_pairs(rules, sq_n);
      std::string text = rules_to_json(comp.rules);
      if (sq_out.empty()) {
        std::cout << text << "\n";
      } else {
        spit(sq_out, text);
        emit(json{{"written", sq_out},
                  {"tiles", comp.rules.tile_count()},
                  {"consistency_penalty", comp.consistency_penalty}});
      }
    } else if (*c_sim) {
      if (sim_layer == 1) {
        auto rows = l1::simulate_layer1(int(sim_n));
        auto tags = l1::tag_clean_corrupt(rows, int(sim_n) - 2);
        json j;
        j["n"] = sim_n;
        j["mu"] = l1::mu(sim_n);
        json ends = json::array();
        for (int t = 1; t <= int(rows.size()); ++t)
          if (l1::is_end_row(rows[t - 1], int(sim_n) - 2)) ends.push_back(t);
        j["end_rows"] = ends;
        json census = json::array();
        for (auto& iv : tags.back())
          census.push_back({{"size", iv.size()}, {"tag", iv.tag}, {"clean", iv.clean}});
        j["final_intervals"] = census;
        if (dump_final) j["final_row"] = l1::row_to_string(rows.back());
        if (pretty)
          for (auto& r : rows) std::cerr << l1::row_to_string(r) << "\n";
        emit(j);
      } else if (sim_layer == 2) {
        auto rows = l1::simulate_layer1(int(sim_n));
        auto tags = l1::tag_clean_corrupt(rows, int(sim_n) - 2);
        auto first = l2::translate_l1_to_l2(rows.back());
        auto res = l2::simulate_layer2(first, sim_n, &tags.back());
        json j;
        j["n"] = sim_n;
        j["census"] = json::parse(l2::census_to_json(res.census));
        if (dump_final) j["final_row"] = l2::row_to_string(res.final_row);
        if (pretty) std::cerr << l2::row_to_string(res.final_row) << "\n";
        emit(j);
      } else if (sim_layer == 3) {
        auto grid = l34::build_gwt_grid(int(sim_n), l34::ends_in_one_verifier());
        auto cost = l34::evaluate_composite(grid);
        emit(json{{"n", sim_n},
                  {"total", cost.total},
                  {"border_adjust", cost.border_adjust},
                  {"P1", cost.P1},
                  {"F1", cost.F1},
                  {"F2", cost.F2},
                  {"F3", cost.F3},
                  {"R", cost.R}});
      } else if (sim_layer == 4) {
        if (sim_problem.empty() || sim_x.empty() || sim_z.empty())
          fail(errc::usage, "--problem, --x and --z are required for layer 4");
        auto p = load_problem(sim_problem);
        auto z = parse_bits(sim_z);
        auto kr = l34::krentel_cost(p, sim_x, z);
        long long mu_big = l34::strip_budget_mu(p);
        auto sizes = l34::ideal_sizes(mu_big);
        json roles = json::array();
        long long reject = 0, checks = 0, accepts = 0;
        for (long long s : sizes) {
          auto role = l34::interval_role(s, mu_big, z, kr.f_value, p.nbar);
          if (role.kind == l34::Role::Reject) ++reject;
          if (role.kind == l34::Role::CheckBit) ++checks;
          if (role.kind == l34::Role::Accept) ++accepts;
        }
        roles.push_back({{"check", checks}, {"reject", reject}, {"accept", accepts}});
        emit(json{{"x", sim_x},
                  {"z", sim_z},
                  {"mu", mu_big},
                  {"role_census", roles},
                  {"strip_total", l34::fwt_strip_total(p, sim_x, z, sizes, mu_big)},
                  {"target_total", kr.target_total}});
      } else {
        fail(errc::usage, "unknown layer");
      }
    } else if (*c_red) {
      std::cout << l2::reduce_input(red_x) << "\n";
    } else if (*c_mu) {
      std::cout << l1::mu(mu_n) << "\n";
    } else if (*c_solve) {
      TileRuleSet rules = rules_from_json(slurp(solve_rules));
      SolverResult res = exhaustive
                             ? solve_exhaustive(rules, solve_h, solve_w, solver_budget(budget))
                             : solve_dp(rules, solve_h, solve_w, !witness_out.empty(),
                                        solver_budget(budget));
      json j;
      j["min_cost"] = res.min_cost;
      j["explored_states"] = res.explored_states;
      if (res.witness && !witness_out.empty()) {
        spit(witness_out, tiling_to_json(rules, *res.witness));
        j["witness"] = witness_out;
      }
      emit(j);
    } else if (*c_audit || *c_inject) {
      flab::FaultPlan plan;
      plan.seed = audit_seed;
      plan.count = audit_count;
      plan.repair_upward = !no_repair;
      plan.placement = placement == "row"        ? flab::Placement::RowTargeted
                       : placement == "interval" ? flab::Placement::IntervalTargeted
                                                 : flab::Placement::Uniform;
      auto base = l1::simulate_layer1(int(audit_n));
      auto injected = flab::inject(base, int(audit_n), plan);
      auto rep = flab::audit(injected.rows, int(audit_n), plan.seed);
      json j = json::parse(flab::report_to_json(rep, audit_rows));
      if (*c_inject) {
        json subs = json::array();
        for (auto& s : injected.substitutions)
          subs.push_back({{"row", s.row},
                          {"col", s.col},
                          {"before", l1::tile_name(s.before)},
                          {"after", l1::tile_name(s.after)}});
        j["substitutions"] = subs;
      }
      emit(j);
      return rep.all_pass ? 0 : 1;
    } else if (*c_verify) {
      std::vector<int> ns;
      std::stringstream ss(n_list);
      std::string item;
      while (std::getline(ss, item, ',')) ns.push_back(std::atoi(item.c_str()));
      json j = run_verify_lemmas(ns, verify_seeds, verify_count, threads);
      emit(j);
      return j["all_pass"].get<bool>() ? 0 : 1;
    } else if (*c_kr) {
      auto p = load_problem(kr_problem);
      auto z = parse_bits(kr_z);
      auto kr = l34::krentel_cost(p, kr_x, z);
      emit(json{{"x", kr_x},
                {"z", kr_z},
                {"c_value", kr.c_value},
                {"f_value", kr.f_value},
                {"target_total", kr.target_total},
                {"queries", kr.queries}});
    } else if (*c_dump) {
      json written = json::array();
      auto save = [&](const std::string& name, const std::string& text) {
        spit(dump_dir + "/" + name, text);
        written.push_back(name);
      };
      save("layer1_machine.json", tm_to_json(l1::layer1_machine()));
      save("binary_counter.json", tm_to_json(l2::binary_counter_machine()));
      save("consensus_machine.json", tm_to_json(l34::consensus_machine()));
      save("gwt_verifier_ends_in_one.json", tm_to_json(l34::ends_in_one_verifier().tm));
      save("stage_one_counter.json", tm_to_json(l34::stage_one_machine().tm));
      for (int i = 1; i <= 4; ++i)
        save("problem" + std::to_string(i) + ".json",
             l34::problem_to_json(l34::toy_problem(i)));
      {
        TileRuleSet demo;
        demo.tiles = {{"a", {}, false}, {"b", {}, false}, {"c", {}, false}};
        demo.add_horizontal(0, 1, 1);
        demo.add_horizontal(1, 0, 1);
        demo.add_vertical(2, 2, 2);
        demo.add_square(0, 0, 0, 0, 1);
        save("demo_rules.json", rules_to_json(demo));
      }
      emit(json{{"dir", dump_dir}, {"written", written}});
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case errc::capacity:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
