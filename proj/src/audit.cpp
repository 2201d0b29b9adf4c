#include "fairrec/audit.hpp"

#include <algorithm>
#include <cstdint>

#include "fairrec/allocator.hpp"
#include "fairrec/metrics.hpp"

namespace fairrec {

std::pair<bool, std::optional<Ef1Witness>> check_ef1(const Instance& inst,
                                                     const Allocation& alloc,
                                                     double tolerance) {
  const std::size_t m = inst.customers;
  for (std::size_t u = 0; u < m; ++u) {
    double own = 0.0;
    for (std::uint32_t p : alloc.bundles[u]) own += inst.score(u, p);
    for (std::size_t w = 0; w < m; ++w) {
      if (w == u || alloc.bundles[w].empty()) continue;
      double other = 0.0;
      double best_item = 0.0;
      for (std::uint32_t p : alloc.bundles[w]) {
        const double v = inst.score(u, p);
        other += v;
        best_item = std::max(best_item, v);
      }
      if (own < other - best_item - tolerance) {
        return {false, Ef1Witness{u, w, other - best_item - own}};
      }
    }
  }
  return {true, std::nullopt};
}

std::vector<double> envy_matrix(const Instance& inst, const Allocation& alloc,
                                std::size_t k) {
  const std::size_t m = inst.customers;
  TopKCache cache(inst, k);
  std::vector<double> envy(m * m, 0.0);
  for (std::size_t u = 0; u < m; ++u) {
    const double own = cache.utility(u, alloc.bundles[u]);
    for (std::size_t w = 0; w < m; ++w) {
      if (w == u) continue;
      const double other = cache.utility(u, alloc.bundles[w]);
      envy[u * m + w] = std::max(other - own, 0.0);
    }
  }
  return envy;
}

namespace {

// Walks every set partition of `items` elements into at most `agents` blocks
// as a restricted-growth string, tracking block sums per agent valuation.
class PartitionEnumerator {
 public:
  PartitionEnumerator(std::span<const std::vector<double>> rows,
                      std::size_t agents)
      : rows_(rows),
        agents_(agents),
        items_(rows.empty() ? 0 : rows[0].size()),
        best_(rows.size(), 0.0),
        sums_(rows.size() * agents, 0.0) {}

  std::vector<double> run() {
    if (items_ > 0) descend(0, 0);
    return std::move(best_);
  }

 private:
  void descend(std::size_t item, std::size_t blocks_used) {
    if (item == items_) {
      score();
      return;
    }
    const std::size_t limit = std::min(blocks_used + 1, agents_);
    for (std::size_t block = 0; block < limit; ++block) {
      for (std::size_t a = 0; a < rows_.size(); ++a) {
        sums_[a * agents_ + block] += rows_[a][item];
      }
      descend(item + 1, std::max(blocks_used, block + 1));
      for (std::size_t a = 0; a < rows_.size(); ++a) {
        sums_[a * agents_ + block] -= rows_[a][item];
      }
    }
  }

  void score() {
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      double worst = sums_[a * agents_];
      for (std::size_t block = 1; block < agents_; ++block) {
        worst = std::min(worst, sums_[a * agents_ + block]);
      }
      best_[a] = std::max(best_[a], worst);
    }
  }

  std::span<const std::vector<double>> rows_;
  std::size_t agents_;
  std::size_t items_;
  std::vector<double> best_;
  std::vector<double> sums_;
};

}  // namespace

std::vector<double> brute_force_mms(
    std::span<const std::vector<double>> valuation_rows, std::size_t agents) {
  if (valuation_rows.empty()) return {};
  const std::size_t items = valuation_rows[0].size();
  for (const auto& row : valuation_rows) {
    if (row.size() != items) {
      raise(ErrorCode::LengthMismatch,
            "valuation rows have differing item counts");
    }
  }
  if (items > 10) {
    raise(ErrorCode::TooLarge,
          "exhaustive enumeration is limited to 10 items, got " +
              std::to_string(items));
  }
  if (agents < 1 || agents > 4) {
    raise(ErrorCode::TooLarge,
          "exhaustive enumeration is limited to 1..4 agents, got " +
              std::to_string(agents));
  }
  return PartitionEnumerator(valuation_rows, agents).run();
}

AuditResult audit_run(const Instance& inst, const RunConfig& cfg,
                      const Allocation& alloc, Strategy strategy) {
  const std::size_t n = inst.producers;
  const std::uint64_t floor =
      exposure_guarantee(inst.customers, n, cfg.k, cfg.alpha);

  AuditResult result;
  auto [holds, witness] = check_ef1(inst, alloc);
  result.ef1_holds = holds;
  result.ef1_witness = witness;

  result.exactly_k = alloc.bundles.size() == inst.customers;
  for (const auto& bundle : alloc.bundles) {
    if (bundle.size() != cfg.k) {
      result.exactly_k = false;
      break;
    }
  }

  const ExposureVector exposure = exposure_of(alloc, n);
  result.mms_satisfied_count = 0;
  result.nonzero_exposure = true;
  for (auto e : exposure.counts) {
    if (e >= floor) ++result.mms_satisfied_count;
    if (e == 0) result.nonzero_exposure = false;
  }

  result.guarantees_expected.applies = strategy == Strategy::kFairRec;
  result.guarantees_expected.exposure_floor = floor;
  result.guarantees_expected.min_satisfied = n - cfg.k;
  result.guarantees_expected.require_nonzero_exposure = floor >= 1;
  return result;
}

}  // namespace fairrec
