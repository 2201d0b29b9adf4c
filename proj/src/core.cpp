#include "fairrec/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace fairrec {

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kFairRec: return "fairrec";
    case Strategy::kTopK: return "top_k";
    case Strategy::kRandomK: return "random_k";
    case Strategy::kMixedK: return "mixed_k";
    case Strategy::kPoorestK: return "poorest_k";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(const std::string& name) {
  if (name == "fairrec") return Strategy::kFairRec;
  if (name == "top_k" || name == "topk") return Strategy::kTopK;
  if (name == "random_k") return Strategy::kRandomK;
  if (name == "mixed_k") return Strategy::kMixedK;
  if (name == "poorest_k" || name == "pr_k") return Strategy::kPoorestK;
  return std::nullopt;
}

void validate_instance(const Instance& inst, const RunConfig& cfg) {
  const std::size_t m = inst.customers;
  const std::size_t n = inst.producers;

  if (inst.relevance.size() != m * n) {
    raise(ErrorCode::LengthMismatch,
          "relevance has " + std::to_string(inst.relevance.size()) +
              " entries, expected " + std::to_string(m) + "x" +
              std::to_string(n));
  }
  for (std::size_t i = 0; i < inst.relevance.size(); ++i) {
    const double v = inst.relevance[i];
    if (!std::isfinite(v)) {
      raise(ErrorCode::NonFiniteRelevance,
            "entry (" + std::to_string(i / n) + "," + std::to_string(i % n) +
                ") is not finite");
    }
    if (v < 0.0) {
      raise(ErrorCode::NegativeRelevance,
            "entry (" + std::to_string(i / n) + "," + std::to_string(i % n) +
                ") = " + std::to_string(v));
    }
  }
  if (cfg.k < 1 || cfg.k >= n) {
    raise(ErrorCode::KOutOfRange, "need 1 <= k < n, got k=" +
                                      std::to_string(cfg.k) +
                                      ", n=" + std::to_string(n));
  }
  if (n > m * cfg.k) {
    raise(ErrorCode::TooFewSlots, "need n <= m*k, got n=" + std::to_string(n) +
                                      ", m*k=" + std::to_string(m * cfg.k));
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    raise(ErrorCode::AlphaOutOfRange,
          "alpha must lie in [0, 1], got " + std::to_string(cfg.alpha));
  }
}

ExposureVector exposure_of(const Allocation& alloc, std::size_t producers) {
  ExposureVector exposure;
  exposure.counts.assign(producers, 0);
  for (std::size_t u = 0; u < alloc.bundles.size(); ++u) {
    for (std::uint32_t p : alloc.bundles[u]) {
      if (p >= producers) {
        raise(ErrorCode::IndexOutOfRange,
              "bundle of customer " + std::to_string(u) +
                  " references product " + std::to_string(p) + " but n=" +
                  std::to_string(producers));
      }
      ++exposure.counts[p];
    }
  }
  return exposure;
}

std::vector<std::uint32_t> top_k_indices(std::span<const double> row,
                                         std::size_t k) {
  assert(k <= row.size());
  std::vector<std::uint32_t> order(row.size());
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&row](std::uint32_t a, std::uint32_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

namespace {

double bundle_sum(const Instance& inst, std::size_t u,
                  std::span<const std::uint32_t> bundle) {
  double sum = 0.0;
  for (std::uint32_t p : bundle) {
    if (p >= inst.producers) {
      raise(ErrorCode::IndexOutOfRange,
            "product index " + std::to_string(p) + " out of range, n=" +
                std::to_string(inst.producers));
    }
    sum += inst.score(u, p);
  }
  return sum;
}

double normalized_utility(double numerator, double denominator) {
  if (denominator == 0.0) return 1.0;  // all-zero row: any bundle is maximal
  return numerator / denominator;
}

}  // namespace

double utility_of(const Instance& inst, std::size_t u,
                  std::span<const std::uint32_t> bundle, std::size_t k) {
  assert(bundle.size() <= k);
  if (u >= inst.customers) {
    raise(ErrorCode::IndexOutOfRange,
          "customer index " + std::to_string(u) + " out of range, m=" +
              std::to_string(inst.customers));
  }
  const double numerator = bundle_sum(inst, u, bundle);
  const auto top = top_k_indices(inst.row(u), k);
  double denominator = 0.0;
  for (std::uint32_t p : top) denominator += inst.score(u, p);
  return normalized_utility(numerator, denominator);
}

TopKCache::TopKCache(const Instance& inst, std::size_t k)
    : inst_(&inst), k_(k) {
  const std::size_t m = inst.customers;
  flat_indices_.resize(m * k);
  sums_.resize(m);
  for (std::size_t u = 0; u < m; ++u) {
    const auto top = top_k_indices(inst.row(u), k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      flat_indices_[u * k + i] = top[i];
      sum += inst.score(u, top[i]);
    }
    sums_[u] = sum;
  }
}

double TopKCache::utility(std::size_t u,
                          std::span<const std::uint32_t> bundle) const {
  return normalized_utility(bundle_sum(*inst_, u, bundle), sums_[u]);
}

}  // namespace fairrec
