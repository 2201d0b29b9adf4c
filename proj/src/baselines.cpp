#include "fairrec/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "fairrec/rng.hpp"

namespace fairrec {

namespace {

void check_regime(const Instance& inst, std::size_t k) {
  RunConfig cfg;
  cfg.k = k;
  validate_instance(inst, cfg);
}

}  // namespace

Allocation top_k(const Instance& inst, std::size_t k, TieBreak tie_break,
                 std::uint64_t tie_seed) {
  check_regime(inst, k);
  Allocation alloc = Allocation::empty(inst.customers);

  if (tie_break == TieBreak::kLowestIndex) {
    for (std::size_t u = 0; u < inst.customers; ++u) {
      alloc.bundles[u] = top_k_indices(inst.row(u), k);
    }
    return alloc;
  }

  // Seeded-random ties: rank tied products by a per-customer random
  // permutation instead of by index.
  const std::size_t n = inst.producers;
  std::vector<std::uint32_t> rank(n);
  for (std::size_t u = 0; u < inst.customers; ++u) {
    std::iota(rank.begin(), rank.end(), 0u);
    Rng rng(derive_seed(tie_seed, StreamPurpose::kTieBreak, u));
    rng.shuffle(std::span<std::uint32_t>(rank));
    const auto row = inst.row(u);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (row[a] != row[b]) return row[a] > row[b];
                        return rank[a] < rank[b];
                      });
    order.resize(k);
    alloc.bundles[u] = std::move(order);
  }
  return alloc;
}

Allocation random_k(const Instance& inst, std::size_t k, std::uint64_t seed) {
  check_regime(inst, k);
  Allocation alloc = Allocation::empty(inst.customers);
  const auto n = static_cast<std::uint32_t>(inst.producers);
  for (std::size_t u = 0; u < inst.customers; ++u) {
    Rng rng(derive_seed(seed, StreamPurpose::kRandomK, u));
    alloc.bundles[u] =
        rng.sample_without_replacement(n, static_cast<std::uint32_t>(k));
  }
  return alloc;
}

Allocation mixed_k(const Instance& inst, std::size_t k, std::uint64_t seed) {
  check_regime(inst, k);
  const std::size_t top_count = (k + 1) / 2;  // ceil(k/2)
  const std::size_t n = inst.producers;

  Allocation alloc = Allocation::empty(inst.customers);
  std::vector<std::uint8_t> taken(n);
  std::vector<std::uint32_t> remaining;
  remaining.reserve(n);

  for (std::size_t u = 0; u < inst.customers; ++u) {
    auto bundle = top_k_indices(inst.row(u), top_count);

    std::fill(taken.begin(), taken.end(), 0);
    for (std::uint32_t p : bundle) taken[p] = 1;
    remaining.clear();
    for (std::uint32_t p = 0; p < n; ++p) {
      if (!taken[p]) remaining.push_back(p);
    }

    Rng rng(derive_seed(seed, StreamPurpose::kMixedK, u));
    const std::size_t extra = k - top_count;
    for (std::size_t i = 0; i < extra; ++i) {
      const std::size_t j = i + rng.below(remaining.size() - i);
      std::swap(remaining[i], remaining[j]);
    }
    std::sort(remaining.begin(), remaining.begin() + extra);
    bundle.insert(bundle.end(), remaining.begin(), remaining.begin() + extra);
    alloc.bundles[u] = std::move(bundle);
  }
  return alloc;
}

Allocation poorest_k(const Instance& inst, std::size_t k) {
  check_regime(inst, k);
  const std::size_t n = inst.producers;

  Allocation alloc = Allocation::empty(inst.customers);
  std::vector<std::uint64_t> exposure(n, 0);
  std::vector<std::uint32_t> order(n);

  for (std::size_t u = 0; u < inst.customers; ++u) {
    std::iota(order.begin(), order.end(), 0u);
    const auto least_exposed = [&exposure](std::uint32_t a, std::uint32_t b) {
      if (exposure[a] != exposure[b]) return exposure[a] < exposure[b];
      return a < b;
    };
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                     least_exposed);
    std::sort(order.begin(), order.begin() + k, least_exposed);

    auto& bundle = alloc.bundles[u];
    bundle.assign(order.begin(), order.begin() + k);
    for (std::uint32_t p : bundle) ++exposure[p];
  }
  return alloc;
}

}  // namespace fairrec
