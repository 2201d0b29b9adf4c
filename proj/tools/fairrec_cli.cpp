// Command-line driver: synthetic instance generation, single runs with
// optional guarantee audit, and strategy x k x alpha x seed sweeps.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairrec/allocator.hpp"
#include "fairrec/core.hpp"
#include "fairrec/data_io.hpp"
#include "fairrec/experiment.hpp"
#include "fairrec/log.hpp"

namespace {

using namespace fairrec;

// Accepts "3", "1,2,5" and "1..20".
std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    const std::size_t dots = item.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = std::stoull(item.substr(0, dots));
      const std::uint64_t hi = std::stoull(item.substr(dots + 2));
      if (hi < lo) throw CLI::ValidationError("range `" + item + "` is empty");
      for (std::uint64_t v = lo; v <= hi; ++v) values.push_back(v);
    } else {
      values.push_back(std::stoull(item));
    }
  }
  if (values.empty()) throw CLI::ValidationError("empty list `" + text + "`");
  return values;
}

// Accepts "0.5", "0,0.25,1" and "0:0.1:1" (lo:step:hi, inclusive).
std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    const std::size_t c1 = item.find(':');
    if (c1 != std::string::npos) {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        throw CLI::ValidationError("expected lo:step:hi in `" + item + "`");
      }
      const double lo = std::stod(item.substr(0, c1));
      const double step = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
      const double hi = std::stod(item.substr(c2 + 1));
      if (step <= 0.0) throw CLI::ValidationError("step must be > 0");
      for (int i = 0;; ++i) {
        const double v = lo + step * i;
        if (v > hi + step * 1e-9) break;
        values.push_back(std::min(v, hi));
      }
    } else {
      values.push_back(std::stod(item));
    }
  }
  if (values.empty()) throw CLI::ValidationError("empty list `" + text + "`");
  return values;
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> strategies;
  for (const auto& name : names) {
    const auto strategy = parse_strategy(name);
    if (!strategy) {
      throw CLI::ValidationError(
          "unknown strategy `" + name +
          "` (expected fairrec|top_k|random_k|mixed_k|poorest_k)");
    }
    strategies.push_back(*strategy);
  }
  return strategies;
}

nlohmann::json audit_to_json(const AuditResult& audit) {
  nlohmann::json j{
      {"ef1_holds", audit.ef1_holds},
      {"exactly_k", audit.exactly_k},
      {"mms_satisfied_count", audit.mms_satisfied_count},
      {"nonzero_exposure", audit.nonzero_exposure},
      {"guarantees_hold", audit.guarantees_hold()},
      {"contract",
       {{"applies", audit.guarantees_expected.applies},
        {"exposure_floor", audit.guarantees_expected.exposure_floor},
        {"min_satisfied", audit.guarantees_expected.min_satisfied},
        {"require_nonzero_exposure",
         audit.guarantees_expected.require_nonzero_exposure}}},
  };
  if (audit.ef1_witness) {
    j["ef1_witness"] = {{"envious", audit.ef1_witness->envious},
                        {"envied", audit.ef1_witness->envied},
                        {"margin", audit.ef1_witness->margin}};
  }
  return j;
}

void print_report_line(const FairnessReport& r) {
  std::cout << r.strategy << ',' << r.k << ',' << format_sig6(r.alpha) << ','
            << r.seed << ',' << format_sig6(r.H) << ',' << format_sig6(r.Z)
            << ',' << format_sig6(r.L) << ',' << format_sig6(r.Y) << ','
            << format_sig6(r.mu_phi) << ',' << format_sig6(r.std_phi) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided fair recommendation engine"};
  app.require_subcommand(1);

  // --- gen-synthetic ---------------------------------------------------
  auto* gen = app.add_subcommand(
      "gen-synthetic", "Generate a synthetic relevance matrix CSV");
  SyntheticSpec spec;
  std::string model = "zipf";
  std::string gen_out;
  gen->add_option("-m,--customers", spec.customers, "Number of customers")
      ->required();
  gen->add_option("-n,--producers", spec.producers, "Number of producers")
      ->required();
  gen->add_option("--model", model, "Popularity model: zipf|uniform")
      ->check(CLI::IsMember({"zipf", "uniform"}));
  gen->add_option("--exponent", spec.exponent, "Zipf exponent (> 0)");
  gen->add_option("--noise", spec.noise, "Multiplicative noise scale");
  gen->add_option("--seed", spec.seed, "Generator seed");
  gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

  // --- shared run/sweep/audit options ----------------------------------
  struct CommonArgs {
    std::string instance;
    std::vector<std::string> strategies;
    std::string ks = "10";
    std::string alphas = "1";
    std::optional<std::string> seeds;
    std::string out_dir;
    std::string format = "csv";
    bool series = false;
    bool audit_flag = false;
  };

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run one strategy and report metrics");
  run->add_option("--instance", run_args.instance, "Relevance CSV path")
      ->required();
  run->add_option("--strategy", run_args.strategies,
                  "fairrec|top_k|random_k|mixed_k|poorest_k")
      ->required()
      ->expected(1);
  run->add_option("--k", run_args.ks, "Recommendation size");
  run->add_option("--alpha", run_args.alphas, "Exposure-guarantee fraction");
  run->add_option("--seed", run_args.seeds,
                  "Seed (ordering for fairrec, sampling for random baselines); "
                  "identity ordering if omitted");
  run->add_option("--out", run_args.out_dir, "Output directory (optional)");
  run->add_option("--format", run_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--series", run_args.series, "Also emit lorenz/cdf series");
  run->add_flag("--audit", run_args.audit_flag,
                "Verify the fairness guarantee block");

  CommonArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "Cross-product sweep over strategies, k, alpha and seeds");
  sweep->add_option("--instance", sweep_args.instance, "Relevance CSV path")
      ->required();
  sweep->add_option("--strategy", sweep_args.strategies,
                    "Strategies (repeat or comma-separate)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--k", sweep_args.ks, "k values, e.g. 1..20 or 5,10");
  sweep->add_option("--alpha", sweep_args.alphas,
                    "alpha values, e.g. 0:0.1:1 or 0.5");
  sweep->add_option("--seed", sweep_args.seeds,
                    "seed values, e.g. 0..9; identity ordering if omitted");
  sweep->add_option("--out", sweep_args.out_dir, "Output directory")
      ->required();
  sweep->add_option("--format", sweep_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--series", sweep_args.series, "Emit per-run series files");
  sweep->add_flag("--audit", sweep_args.audit_flag, "Audit every run");

  CommonArgs audit_args;
  auto* audit_cmd = app.add_subcommand(
      "audit", "Run one strategy and print its guarantee audit as JSON");
  audit_cmd->add_option("--instance", audit_args.instance, "Relevance CSV path")
      ->required();
  audit_cmd->add_option("--strategy", audit_args.strategies, "Strategy name")
      ->required()
      ->expected(1);
  audit_cmd->add_option("--k", audit_args.ks, "Recommendation size");
  audit_cmd->add_option("--alpha", audit_args.alphas,
                        "Exposure-guarantee fraction");
  audit_cmd->add_option("--seed", audit_args.seeds, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      spec.model = model == "zipf" ? SyntheticSpec::Popularity::kZipf
                                   : SyntheticSpec::Popularity::kUniform;
      const LoadedInstance loaded = generate_synthetic(spec);
      write_instance_csv(loaded, gen_out);
      std::cout << "wrote " << loaded.instance.customers << "x"
                << loaded.instance.producers << " instance to " << gen_out
                << '\n';
      return 0;
    }

    const CommonArgs& args = run->parsed()     ? run_args
                             : sweep->parsed() ? sweep_args
                                               : audit_args;
    const LoadedInstance loaded = load_relevance_csv(args.instance);
    log_info("loaded " + std::to_string(loaded.instance.customers) + "x" +
             std::to_string(loaded.instance.producers) + " instance from " +
             args.instance);

    ExperimentPlan plan;
    plan.strategies = parse_strategies(args.strategies);
    for (std::uint64_t k : parse_uint_list(args.ks)) {
      plan.ks.push_back(static_cast<std::size_t>(k));
    }
    plan.alphas = parse_double_list(args.alphas);
    if (args.seeds) {
      plan.seeds = parse_uint_list(*args.seeds);
      plan.identity_ordering = false;
    } else {
      plan.seeds = {0};
      plan.identity_ordering = true;
    }
    plan.format = args.format == "json" ? OutputFormat::kJson
                                        : OutputFormat::kCsv;
    plan.audit = args.audit_flag;
    plan.emit_series = args.series;

    if (audit_cmd->parsed()) {
      const RunOutcome outcome = run_single(
          loaded.instance, plan.strategies[0], plan.ks[0], plan.alphas[0],
          plan.seeds[0], plan.identity_ordering, /*audit=*/true);
      std::cout << audit_to_json(*outcome.audit).dump(2) << '\n';
      return outcome.audit->guarantees_hold() ? 0 : 1;
    }

    if (run->parsed()) {
      const RunOutcome outcome = run_single(
          loaded.instance, plan.strategies[0], plan.ks[0], plan.alphas[0],
          plan.seeds[0], plan.identity_ordering, plan.audit);
      std::cout << "strategy,k,alpha,seed,H,Z,L,Y,mu_phi,std_phi\n";
      print_report_line(outcome.report);
      if (!args.out_dir.empty()) {
        plan.out_dir = args.out_dir;
        std::filesystem::create_directories(plan.out_dir);
        const std::vector<FairnessReport> rows{outcome.report};
        const char* name =
            plan.format == OutputFormat::kJson ? "reports.json" : "reports.csv";
        write_reports(rows, plan.out_dir / name, plan.format);
        if (plan.emit_series) {
          const ExposureVector exposure =
              exposure_of(outcome.allocation, loaded.instance.producers);
          write_lorenz_series(lorenz_series(exposure.counts),
                              plan.out_dir / "lorenz.csv", plan.format);
          write_utility_series(
              utility_cdf_series(loaded.instance, outcome.allocation,
                                 plan.ks[0]),
              plan.out_dir / "ucdf.csv", plan.format);
        }
      }
      if (outcome.audit) {
        std::cerr << (outcome.audit->guarantees_hold()
                          ? "audit: guarantees hold\n"
                          : "audit: GUARANTEE VIOLATION\n");
        return outcome.audit->guarantees_hold() ? 0 : 1;
      }
      return 0;
    }

    // sweep
    plan.out_dir = sweep_args.out_dir;
    const SweepResult result = run_sweep(loaded.instance, plan);
    if (result.outcomes.empty()) {
      std::cout << "nothing to do (empty plan)\n";
      return 0;
    }
    std::cout << "sweep complete: " << result.ok_count << " ok, "
              << result.skipped_count << " skipped, " << result.failed_count
              << " failed\nreports: " << result.report_path.string()
              << "\nsummary: " << result.summary_path.string() << '\n';
    return result.audits_passed ? 0 : 1;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
