#pragma once

#include <string>
#include <vector>

#include "ti/layer1.hpp"

namespace ti::flab {

enum class Placement { Uniform, RowTargeted, IntervalTargeted };

struct FaultPlan {
  uint64_t seed = 0;
  int count = 0;
  Placement placement = Placement::Uniform;
  int target_row = -1;        // RowTargeted
  bool repair_upward = true;  // re-derive rows above each substitution
};

struct Substitution {
  int row = 0;  // grid row index (1-based interior)
  int col = 0;  // interior column
  l1::Tile before, after;
};

struct InjectResult {
  std::vector<l1::Row> rows;  // rows r_1..r_{n-2}
  std::vector<Substitution> substitutions;
};

// Perturbs `base` with plan.count tile substitutions. With repair_upward the
// rows above each touched row are re-derived as the local continuation.
InjectResult inject(const std::vector<l1::Row>& base, int n, const FaultPlan& plan);

struct BoundCheck {
  std::string name;
  long long lhs = 0;
  long long rhs = 0;
  bool gated = false;    // bound only claimed under the fault-count gate
  bool gate_ok = true;   // gate satisfied (always true for ungated checks)
  bool pass = true;      // !gate_ok || lhs <= rhs
};

struct AuditReport {
  int n = 0;
  uint64_t seed = 0;
  long long F = 0;
  std::vector<int> h, v;  // by grid row 0..n-1
  int segments_total = 0;
  int complete_count = 0;
  long long mu_n = 0;
  long long a_final = 0;
  std::vector<long long> clean_sizes_final;
  std::vector<long long> clean_tags_final;
  std::vector<long long> missing_sizes;  // {2..mu+1} minus clean sizes
  std::vector<BoundCheck> checks;
  bool all_pass = true;
};

AuditReport audit(const std::vector<l1::Row>& rows, int n, uint64_t seed = 0);

std::string report_to_json(const AuditReport& report, bool include_rows = false);

struct CampaignSummary {
  int runs = 0;
  int failed = 0;
  long long max_f = 0;
  std::vector<AuditReport> failures;  // reports with a failed check (first few)
};

// Runs `runs` seeded injections against the fault-free base for side n and
// audits each; deterministic for a fixed seed regardless of thread count.
CampaignSummary audit_campaign(int n, uint64_t seed0, int runs, int count_per_run, int threads,
                               Placement placement = Placement::Uniform);

}  // namespace ti::flab
