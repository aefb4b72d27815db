#include "ti/faultlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <thread>

namespace ti::flab {

using l1::Row;
using l1::Tile;

namespace {

// The 63 well-formed Layer-1 tiles.
const std::vector<Tile>& tile_alphabet() {
  static const std::vector<Tile> tiles = [] {
    std::vector<Tile> v;
    v.push_back(l1::tape(l1::LEnd));
    v.push_back(l1::tape(l1::REnd));
    v.push_back(l1::tape(l1::Blank));
    for (auto s : {l1::X, l1::B, l1::Xbar}) {
      v.push_back(l1::tape(s, l1::Blue));
      v.push_back(l1::tape(s, l1::Red));
    }
    for (int q = 0; q < 9; ++q)
      for (int s = 0; s < 6; ++s) v.push_back(l1::head(l1::State(q), l1::Sym(s)));
    return v;
  }();
  return tiles;
}

}  // namespace

InjectResult inject(const std::vector<l1::Row>& base, int n, const FaultPlan& plan) {
  if (int(base.size()) != n - 2) fail(errc::dimension, "base tiling must have n-2 rows");
  int width = n - 2;
  InjectResult out;
  out.rows = base;
  SplitMix64 rng(plan.seed);

  // Pick distinct cells against the base tiling.
  std::set<std::pair<int, int>> cells;
  int attempts = 0;
  while (int(cells.size()) < plan.count && attempts < 64 * (plan.count + 1)) {
    ++attempts;
    int row;
    if (plan.placement == Placement::RowTargeted) {
      row = plan.target_row >= 1 ? plan.target_row : 1;
    } else {
      row = 1 + int(rng.below(uint64_t(n - 2)));
    }
    const Row& r = base[row - 1];
    int span = std::min(r.prefix_len() + 2, width);
    int col;
    if (plan.placement == Placement::IntervalTargeted) {
      auto ivs = l1::intervals(r);
      if (!ivs.empty()) {
        const auto& iv = ivs[rng.below(ivs.size())];
        col = iv.start + int(rng.below(uint64_t(iv.size())));
      } else {
        col = int(rng.below(uint64_t(span)));
      }
    } else {
      col = int(rng.below(uint64_t(span)));
    }
    cells.insert({row, col});
  }
  if (int(cells.size()) < plan.count)
    fail(errc::capacity, "could not place the requested number of substitutions");

  const auto& alpha = tile_alphabet();
  auto substitute = [&](int row, int col) {
    Row& r = out.rows[row - 1];
    Tile before = r.cell(col);
    Tile after = before;
    while (after == before) after = alpha[rng.below(alpha.size())];
    if (col >= r.prefix_len()) r.cells.resize(col + 1, l1::tape(l1::Blank));
    r.cells[col] = after;
    out.substitutions.push_back({row, col, before, after});
  };

  if (cells.empty()) {
    return out;
  } else if (!plan.repair_upward) {
    for (auto [row, col] : cells) substitute(row, col);
  } else {
    // Re-derive every row above the lowest substitution as the local
    // continuation, applying further substitutions as their rows are reached.
    int first = cells.begin()->first;
    for (int row = first; row <= n - 2; ++row) {
      if (row > first) out.rows[row - 1] = l1::continue_row(out.rows[row - 2], width);
      auto lo = cells.lower_bound({row, -1});
      for (auto it = lo; it != cells.end() && it->first == row; ++it) substitute(row, it->second);
    }
  }
  for (auto& r : out.rows) r.trim();
  return out;
}

namespace {

int row_distance(const Row& a, const Row& b) {
  int m = std::max(a.prefix_len(), b.prefix_len());
  int d = 0;
  for (int i = 0; i < m; ++i)
    if (!(a.cell(i) == b.cell(i))) ++d;
  return d;
}

}  // namespace

AuditReport audit(const std::vector<l1::Row>& rows, int n, uint64_t seed) {
  AuditReport rep;
  rep.n = n;
  rep.seed = seed;
  rep.mu_n = l1::mu(n);
  int width = n - 2;
  int top = n - 2;  // index of the last interior row

  rep.h.assign(n, 0);
  rep.v.assign(n, 0);
  std::vector<char> end_flag(n, 0);
  std::vector<char> valid(n, 0);
  for (int t = 1; t <= top; ++t) {
    const Row& r = rows[t - 1];
    rep.h[t] = l1::row_h(r, width);
    valid[t] = rep.h[t] == 0;
    end_flag[t] = l1::is_end_row(r, width);
  }
  rep.v[0] = l1::init_v(rows[0], width);
  for (int t = 1; t < top; ++t) rep.v[t] = l1::squares_v(rows[t - 1], rows[t], width);
  rep.F = 0;
  for (int t = 0; t < n; ++t) rep.F += rep.h[t] + rep.v[t];

  auto tags = l1::tag_clean_corrupt(rows, width);

  std::vector<int> costs(top + 1, 0);
  for (int t = 0; t <= top; ++t) costs[t] = rep.h[t] + rep.v[t];
  std::vector<char> flags(end_flag.begin(), end_flag.begin() + top + 1);
  auto segments = l1::segment_decomposition(costs, flags);
  rep.segments_total = int(segments.size());
  rep.complete_count = 0;
  for (const auto& s : segments) rep.complete_count += s.complete;

  const auto& final_tags = tags.back();
  std::vector<long long> clean_sizes;
  for (const auto& iv : final_tags)
    if (iv.clean) {
      clean_sizes.push_back(iv.size());
      rep.clean_tags_final.push_back(iv.tag);
    }
  rep.clean_sizes_final = clean_sizes;
  rep.a_final = l1::a_value(clean_sizes);
  {
    std::set<long long> have(clean_sizes.begin(), clean_sizes.end());
    for (long long s = 2; s <= rep.mu_n + 1; ++s)
      if (!have.count(s)) rep.missing_sizes.push_back(s);
  }

  auto check = [&](const std::string& name, long long lhs, long long rhs, bool gated = false,
                   bool gate_ok = true) {
    BoundCheck c{name, lhs, rhs, gated, gate_ok, !gate_ok || lhs <= rhs};
    rep.all_pass = rep.all_pass && c.pass;
    rep.checks.push_back(c);
  };

  // Distance from an invalid row to the row above it.
  {
    long long worst = 0, bound_at_worst = 0;
    bool ok = true;
    for (int t = 2; t <= top; ++t) {
      if (valid[t - 1]) continue;
      long long d = row_distance(rows[t - 2], rows[t - 1]);  // d(r_{t-1}, r_t)
      long long bound = 4LL * rep.h[t - 1] + 2LL * rep.v[t - 1];
      if (d - bound > worst - bound_at_worst) {
        worst = d;
        bound_at_worst = bound;
      }
      if (d > bound) ok = false;
    }
    BoundCheck c{"cl-distUB", worst, bound_at_worst, false, true, ok};
    rep.all_pass = rep.all_pass && ok;
    rep.checks.push_back(c);
  }

  check("lem-segLB", rep.mu_n - 14 * rep.F, rep.complete_count);
  check("lem-cleanLB", rep.mu_n - 26 * rep.F, (long long)clean_sizes.size());
  check("lem-analysisL1", (long long)rep.missing_sizes.size(), 44 * rep.F + 3);

  // Potential bound for every row, using prefix sums of the row costs.
  {
    std::vector<long long> a_by_row(top + 1, 0);
    for (int t = 1; t <= top; ++t) {
      std::vector<long long> sizes;
      for (const auto& iv : tags[t - 1])
        if (iv.clean) sizes.push_back(iv.size());
      a_by_row[t] = l1::a_value(sizes);
    }
    std::vector<long long> prefix(top + 2, 0);  // prefix[t] = sum costs r_2..r_{t}
    for (int t = 2; t <= top; ++t) prefix[t] = prefix[t - 1] + costs[t];
    bool ok = true;
    long long worst_lhs = 0, worst_rhs = 0;
    for (int t = 1; t <= top; ++t) {
      long long rhs = 3 + 12LL * costs[t - 1] + 18LL * (t >= 4 ? prefix[t - 2] : 0);
      if (a_by_row[t] - rhs > worst_lhs - worst_rhs) {
        worst_lhs = a_by_row[t];
        worst_rhs = rhs;
      }
      if (a_by_row[t] > rhs) ok = false;
    }
    BoundCheck c{"lem-potential", worst_lhs, worst_rhs, false, true, ok};
    rep.all_pass = rep.all_pass && ok;
    rep.checks.push_back(c);
  }

  // Clean tags lost per row.
  {
    bool ok = true;
    long long worst_lhs = 0, worst_rhs = 0;
    std::set<long long> prev_tags;
    for (const auto& iv : tags[0])
      if (iv.clean) prev_tags.insert(iv.tag);
    for (int t = 1; t < top; ++t) {
      std::set<long long> cur;
      for (const auto& iv : tags[t])
        if (iv.clean) cur.insert(iv.tag);
      long long lost = 0;
      for (long long tag : prev_tags)
        if (!cur.count(tag)) ++lost;
      long long bound = 12LL * rep.h[t] + 6LL * rep.v[t];
      if (lost - bound > worst_lhs - worst_rhs) {
        worst_lhs = lost;
        worst_rhs = bound;
      }
      if (lost > bound) ok = false;
      prev_tags = std::move(cur);
    }
    BoundCheck c{"lem-cleanLost", worst_lhs, worst_rhs, false, true, ok};
    rep.all_pass = rep.all_pass && ok;
    rep.checks.push_back(c);
  }

  // Tag sanity: unique within a row, bounded by the row index.
  {
    bool ok = true;
    for (int t = 1; t <= top && ok; ++t) {
      std::set<long long> seen;
      for (const auto& iv : tags[t - 1]) {
        if (!iv.clean) continue;
        if (iv.tag < 1 || iv.tag > t || seen.count(iv.tag)) ok = false;
        seen.insert(iv.tag);
      }
    }
    BoundCheck c{"lem-tags", ok ? 0 : 1, 0, false, true, ok};
    rep.all_pass = rep.all_pass && ok;
    rep.checks.push_back(c);
  }

  double q = std::pow(double(n), 0.25);
  bool gate = double(rep.F) <= q / 40.0;
  check("lem-numSegUB", rep.segments_total, (long long)std::floor(4 * q + 2 * rep.F + 1e-9), true,
        gate);
  check("lem-lengthUB", l1::row_length(rows.back()),
        (long long)std::floor(9 * std::sqrt(double(n)) + 2 * q + 1 + 1e-9), true, gate);
  check("lem-muBounds", (long long)std::ceil(q / 2 - 1e-9), rep.mu_n);

  // Interval count always equals row weight - 1 (rows of weight >= 1).
  {
    bool ok = true;
    for (int t = 1; t <= top && ok; ++t) {
      int w = l1::row_weight(rows[t - 1]);
      if (w >= 1 && int(l1::intervals(rows[t - 1]).size()) != w - 1) ok = false;
    }
    BoundCheck c{"fact-weights-intervals", ok ? 0 : 1, 0, false, true, ok};
    rep.all_pass = rep.all_pass && ok;
    rep.checks.push_back(c);
  }

  return rep;
}

std::string report_to_json(const AuditReport& rep, bool include_rows) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["seed"] = rep.seed;
  j["f_total"] = rep.F;
  j["mu"] = rep.mu_n;
  j["segments"] = rep.segments_total;
  j["complete_segments"] = rep.complete_count;
  j["a_final"] = rep.a_final;
  j["clean_sizes_final"] = rep.clean_sizes_final;
  j["clean_tags_final"] = rep.clean_tags_final;
  j["missing_sizes"] = rep.missing_sizes;
  if (include_rows) {
    j["h"] = rep.h;
    j["v"] = rep.v;
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"gated", c.gated},
                      {"gate_ok", c.gate_ok},
                      {"pass", c.pass}});
  j["bound_checks"] = checks;
  j["all_pass"] = rep.all_pass;
  return j.dump(2);
}

CampaignSummary audit_campaign(int n, uint64_t seed0, int runs, int count_per_run, int threads,
                               Placement placement) {
  auto base = l1::simulate_layer1(n);
  CampaignSummary sum;
  sum.runs = runs;
  if (threads < 1) threads = 1;
  std::mutex mu;
  std::atomic<int> next_run{0};
  auto worker = [&] {
    for (;;) {
      int i = next_run.fetch_add(1);
      if (i >= runs) return;
      FaultPlan plan;
      plan.seed = seed0 + uint64_t(i);
      plan.count = count_per_run;
      plan.placement = placement;
      auto injected = inject(base, n, plan);
      auto rep = audit(injected.rows, n, plan.seed);
      std::lock_guard<std::mutex> lock(mu);
      sum.max_f = std::max(sum.max_f, rep.F);
      if (!rep.all_pass) {
        ++sum.failed;
        if (sum.failures.size() < 8) sum.failures.push_back(rep);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return sum;
}

}  // namespace ti::flab
