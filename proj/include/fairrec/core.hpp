#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairrec/error.hpp"

namespace fairrec {

// Dense m x n relevance matrix: customers are rows, producers columns.
// Entries are nonnegative finite scores; producer identity == product
// identity (portfolio weighting for multi-product producers is not
// implemented). External string IDs map to these dense indices in data_io.
struct Instance {
  std::size_t customers = 0;  // m
  std::size_t producers = 0;  // n
  std::vector<double> relevance;  // row-major, customers * producers

  double score(std::size_t u, std::size_t p) const {
    return relevance[u * producers + p];
  }

  std::span<const double> row(std::size_t u) const {
    return {relevance.data() + u * producers, producers};
  }
};

enum class TieBreak {
  kLowestIndex,   // deterministic default
  kSeededRandom,  // uniform choice among tied candidates, from a derived stream
};

struct RunConfig {
  std::size_t k = 1;
  double alpha = 1.0;  // exposure-guarantee fraction in [0, 1]
  std::optional<std::uint64_t> ordering_seed;  // customer ordering; identity if unset
  TieBreak tie_break = TieBreak::kLowestIndex;
};

enum class Strategy { kFairRec, kTopK, kRandomK, kMixedK, kPoorestK };

const char* to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(const std::string& name);

// Per-customer product bundles, items in grant order. A completed run holds
// exactly k distinct products per customer.
struct Allocation {
  std::vector<std::vector<std::uint32_t>> bundles;

  static Allocation empty(std::size_t customers) {
    Allocation a;
    a.bundles.resize(customers);
    return a;
  }
};

struct ExposureVector {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }
};

// Rejects out-of-regime inputs: requires 1 <= k < n, n <= m*k, alpha in
// [0, 1], and a finite nonnegative relevance matrix of matching shape.
void validate_instance(const Instance& inst, const RunConfig& cfg);

// counts[p] = number of bundles containing p.
ExposureVector exposure_of(const Allocation& alloc, std::size_t producers);

// Indices of the k highest-relevance products of `row`, ordered by
// (score descending, index ascending). Deterministic under ties.
std::vector<std::uint32_t> top_k_indices(std::span<const double> row,
                                         std::size_t k);

// Normalized customer utility: bundle relevance sum divided by the sum over
// the customer's k most relevant products. An all-zero row makes both sums 0
// and the utility is defined as 1 (the customer is indifferent, so any bundle
// is maximal). Result lies in [0, 1] for bundles of size <= k.
double utility_of(const Instance& inst, std::size_t u,
                  std::span<const std::uint32_t> bundle, std::size_t k);

// Caches the per-row top-k selections and their relevance sums, which every
// metric and baseline reuses. Summation order matches top_k_indices order so
// that a customer holding exactly her top-k set scores utility 1.0 exactly.
class TopKCache {
 public:
  TopKCache(const Instance& inst, std::size_t k);

  std::size_t k() const { return k_; }
  double top_sum(std::size_t u) const { return sums_[u]; }

  std::span<const std::uint32_t> indices(std::size_t u) const {
    return {flat_indices_.data() + u * k_, k_};
  }

  double utility(std::size_t u, std::span<const std::uint32_t> bundle) const;

 private:
  const Instance* inst_;
  std::size_t k_;
  std::vector<std::uint32_t> flat_indices_;  // m * k
  std::vector<double> sums_;
};

}  // namespace fairrec
