#pragma once

#include <cstdint>

#include "fairrec/core.hpp"

// The four comparison strategies. All return exactly-k, duplicate-free
// bundles under the same Allocation contract as the two-phase allocator.

namespace fairrec {

// Each customer receives her k highest-relevance products.
Allocation top_k(const Instance& inst, std::size_t k,
                 TieBreak tie_break = TieBreak::kLowestIndex,
                 std::uint64_t tie_seed = 0);

// Each customer receives a uniform k-subset of the products.
Allocation random_k(const Instance& inst, std::size_t k, std::uint64_t seed);

// ceil(k/2) top-relevance picks first, the rest drawn uniformly from the
// products not already chosen.
Allocation mixed_k(const Instance& inst, std::size_t k, std::uint64_t seed);

// Producer-centric: customers are processed in index order and each receives
// the k currently least-exposed products (ties by product index); exposure
// counts update after each customer. Metrics are sensitive to this order.
Allocation poorest_k(const Instance& inst, std::size_t k);

}  // namespace fairrec
