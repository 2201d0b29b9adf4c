#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairrec/audit.hpp"
#include "fairrec/core.hpp"
#include "fairrec/data_io.hpp"
#include "fairrec/metrics.hpp"

// Experiment driver shared by the CLI: single runs with optional audit, and
// sweeps over strategies x k x alpha x seeds.

namespace fairrec {

struct ExperimentPlan {
  std::vector<Strategy> strategies;
  std::vector<std::size_t> ks;
  std::vector<double> alphas{1.0};
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::kCsv;
  bool audit = false;
  bool emit_series = false;
  bool identity_ordering = false;  // true: ignore seeds for the customer order
  std::size_t workers = 0;         // 0 = hardware concurrency
};

struct RunOutcome {
  enum class Status { kOk, kSkipped, kFailed };
  Status status = Status::kOk;
  std::string detail;  // skip or failure reason
  FairnessReport report;
  Allocation allocation;
  std::optional<AuditResult> audit;
};

// Executes one strategy and computes the full report. The L metric is always
// measured against a freshly computed lowest-index-tie top-k allocation on
// the same instance and k. The seed doubles as ordering seed for the
// allocator and as sampling seed for the random baselines. Throws on
// validation failure; never writes partial results.
RunOutcome run_single(const Instance& inst, Strategy strategy, std::size_t k,
                      double alpha, std::uint64_t seed,
                      bool identity_ordering, bool audit);

struct SweepResult {
  std::vector<RunOutcome> outcomes;  // sorted by (strategy, k, alpha, seed)
  std::filesystem::path report_path;
  std::filesystem::path summary_path;
  std::size_t ok_count = 0;
  std::size_t skipped_count = 0;
  std::size_t failed_count = 0;
  bool audits_passed = true;  // false iff an audited fairrec run violated
                              // its guarantee block
};

// Cross-product sweep. Out-of-regime (k, instance) pairs are skipped with a
// logged reason; per-entry failures are recorded and the sweep continues.
// Entries run on a worker pool; aggregation and file output are
// deterministic, so identical plans produce byte-identical files.
SweepResult run_sweep(const Instance& inst, const ExperimentPlan& plan);

}  // namespace fairrec
