#include "fairrec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "fairrec/allocator.hpp"
#include "fairrec/baselines.hpp"
#include "fairrec/log.hpp"

namespace fairrec {

namespace {

Allocation dispatch_strategy(const Instance& inst, Strategy strategy,
                             const RunConfig& cfg, std::uint64_t seed) {
  switch (strategy) {
    case Strategy::kFairRec: return fairrec(inst, cfg).allocation;
    case Strategy::kTopK: return top_k(inst, cfg.k);
    case Strategy::kRandomK: return random_k(inst, cfg.k, seed);
    case Strategy::kMixedK: return mixed_k(inst, cfg.k, seed);
    case Strategy::kPoorestK: return poorest_k(inst, cfg.k);
  }
  throw std::logic_error("unhandled strategy");
}

std::string run_label(Strategy strategy, std::size_t k, double alpha,
                      std::uint64_t seed) {
  return std::string(to_string(strategy)) + " k=" + std::to_string(k) +
         " alpha=" + format_sig6(alpha) + " seed=" + std::to_string(seed);
}

bool is_regime_error(ErrorCode code) {
  return code == ErrorCode::KOutOfRange || code == ErrorCode::TooFewSlots ||
         code == ErrorCode::AlphaOutOfRange;
}

}  // namespace

RunOutcome run_single(const Instance& inst, Strategy strategy, std::size_t k,
                      double alpha, std::uint64_t seed, bool identity_ordering,
                      bool audit) {
  RunConfig cfg;
  cfg.k = k;
  cfg.alpha = alpha;
  if (!identity_ordering) cfg.ordering_seed = seed;
  validate_instance(inst, cfg);

  const Allocation alloc = dispatch_strategy(inst, strategy, cfg, seed);
  const ExposureVector exposure = exposure_of(alloc, inst.producers);
  const Allocation reference = top_k(inst, k);
  const ExposureVector reference_exposure =
      exposure_of(reference, inst.producers);

  RunOutcome outcome;
  FairnessReport& report = outcome.report;
  report.strategy = to_string(strategy);
  report.k = k;
  report.alpha = alpha;
  report.seed = seed;
  report.exposure_guarantee_used =
      exposure_guarantee(inst.customers, inst.producers, k, alpha);
  report.H = metric_H(exposure.counts, report.exposure_guarantee_used);
  report.Z = metric_Z(exposure.counts, inst.customers, k);
  report.L = metric_L(exposure.counts, reference_exposure.counts);
  report.Y = metric_Y(inst, alloc, k);
  std::tie(report.mu_phi, report.std_phi) = utility_stats(inst, alloc, k);
  report.producers_satisfied = static_cast<std::size_t>(
      std::count_if(exposure.counts.begin(), exposure.counts.end(),
                    [&report](std::uint64_t e) {
                      return e >= report.exposure_guarantee_used;
                    }));

  if (audit) outcome.audit = audit_run(inst, cfg, alloc, strategy);
  outcome.allocation = alloc;
  return outcome;
}

SweepResult run_sweep(const Instance& inst, const ExperimentPlan& plan) {
  SweepResult result;
  if (plan.strategies.empty()) {
    log_warn("sweep plan lists no strategies; nothing to do");
    return result;
  }
  if (plan.ks.empty()) {
    log_warn("sweep plan lists no recommendation sizes; nothing to do");
    return result;
  }

  auto strategies = plan.strategies;
  std::sort(strategies.begin(), strategies.end());
  strategies.erase(std::unique(strategies.begin(), strategies.end()),
                   strategies.end());
  auto ks = plan.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  auto alphas = plan.alphas;
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  auto seeds = plan.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  struct Entry {
    Strategy strategy;
    std::size_t k;
    double alpha;
    std::uint64_t seed;
  };
  std::vector<Entry> entries;
  for (Strategy s : strategies) {
    for (std::size_t k : ks) {
      for (double a : alphas) {
        for (std::uint64_t seed : seeds) entries.push_back({s, k, a, seed});
      }
    }
  }

  std::filesystem::create_directories(plan.out_dir);
  result.outcomes.resize(entries.size());

  const auto run_entry = [&](std::size_t i) {
    const Entry& e = entries[i];
    RunOutcome& outcome = result.outcomes[i];
    try {
      outcome = run_single(inst, e.strategy, e.k, e.alpha, e.seed,
                           plan.identity_ordering, plan.audit);
      if (plan.emit_series) {
        const std::string tag = std::string(to_string(e.strategy)) + "_k" +
                                std::to_string(e.k) + "_a" +
                                format_sig6(e.alpha) + "_s" +
                                std::to_string(e.seed);
        const char* ext = plan.format == OutputFormat::kJson ? ".json" : ".csv";
        const ExposureVector exposure =
            exposure_of(outcome.allocation, inst.producers);
        write_lorenz_series(lorenz_series(exposure.counts),
                            plan.out_dir / ("lorenz_" + tag + ext),
                            plan.format);
        write_utility_series(
            utility_cdf_series(inst, outcome.allocation, e.k),
            plan.out_dir / ("ucdf_" + tag + ext), plan.format);
      }
    } catch (const Error& err) {
      outcome.status = is_regime_error(err.code()) ? RunOutcome::Status::kSkipped
                                                   : RunOutcome::Status::kFailed;
      outcome.detail = err.what();
      log_warn(run_label(e.strategy, e.k, e.alpha, e.seed) +
               (outcome.status == RunOutcome::Status::kSkipped ? " skipped: "
                                                               : " failed: ") +
               err.what());
    } catch (const std::exception& err) {
      outcome.status = RunOutcome::Status::kFailed;
      outcome.detail = err.what();
      log_error(run_label(e.strategy, e.k, e.alpha, e.seed) + " failed: " +
                err.what());
    }
    // Descriptors are recorded even for skipped entries.
    outcome.report.strategy = to_string(e.strategy);
    outcome.report.k = e.k;
    outcome.report.alpha = e.alpha;
    outcome.report.seed = e.seed;
  };

  std::size_t workers = plan.workers != 0
                            ? plan.workers
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, entries.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) run_entry(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= entries.size()) return;
          run_entry(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<FairnessReport> rows;
  for (const RunOutcome& outcome : result.outcomes) {
    switch (outcome.status) {
      case RunOutcome::Status::kOk:
        ++result.ok_count;
        rows.push_back(outcome.report);
        break;
      case RunOutcome::Status::kSkipped: ++result.skipped_count; break;
      case RunOutcome::Status::kFailed: ++result.failed_count; break;
    }
    if (outcome.audit && !outcome.audit->guarantees_hold()) {
      result.audits_passed = false;
    }
  }

  result.report_path =
      plan.out_dir /
      (plan.format == OutputFormat::kJson ? "reports.json" : "reports.csv");
  write_reports(rows, result.report_path, plan.format);

  nlohmann::json summary;
  summary["report_path"] = result.report_path.string();
  summary["ok"] = result.ok_count;
  summary["skipped"] = result.skipped_count;
  summary["failed"] = result.failed_count;
  summary["audits_passed"] = result.audits_passed;
  nlohmann::json json_entries = nlohmann::json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const RunOutcome& outcome = result.outcomes[i];
    nlohmann::json item{
        {"strategy", to_string(entries[i].strategy)},
        {"k", entries[i].k},
        {"alpha", entries[i].alpha},
        {"seed", entries[i].seed},
    };
    switch (outcome.status) {
      case RunOutcome::Status::kOk: item["status"] = "ok"; break;
      case RunOutcome::Status::kSkipped: item["status"] = "skipped"; break;
      case RunOutcome::Status::kFailed: item["status"] = "failed"; break;
    }
    if (!outcome.detail.empty()) item["detail"] = outcome.detail;
    if (outcome.audit) {
      item["guarantees_hold"] = outcome.audit->guarantees_hold();
      item["ef1_holds"] = outcome.audit->ef1_holds;
      item["exactly_k"] = outcome.audit->exactly_k;
      item["mms_satisfied_count"] = outcome.audit->mms_satisfied_count;
      item["nonzero_exposure"] = outcome.audit->nonzero_exposure;
    }
    json_entries.push_back(std::move(item));
  }
  summary["entries"] = std::move(json_entries);

  result.summary_path = plan.out_dir / "summary.json";
  std::ofstream out(result.summary_path);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write " + result.summary_path.string());
  }
  out << summary.dump(2) << '\n';
  return result;
}

}  // namespace fairrec
