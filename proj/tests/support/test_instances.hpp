#pragma once

// Seeded random instances and parameter tuples for property suites.

#include <cstdint>

#include "fairrec/core.hpp"
#include "fairrec/rng.hpp"

namespace testgen {

struct Params {
  std::size_t m, n, k;
};

// Draws (m, n, k) uniformly with m in [2,50], k in [1,10], n in [3,100] and
// k < n <= m*k; resamples until the regime is satisfiable.
inline Params random_params(fairrec::Rng& rng) {
  for (;;) {
    const std::size_t m = 2 + rng.below(49);
    const std::size_t k = 1 + rng.below(10);
    const std::size_t lo = std::max<std::size_t>(k + 1, 3);
    const std::size_t hi = std::min<std::size_t>(100, m * k);
    if (lo > hi) continue;
    const std::size_t n = lo + rng.below(hi - lo + 1);
    return {m, n, k};
  }
}

// integer_scores: draws from {0,...,9} (stored as doubles, sums stay exact);
// otherwise uniform reals in [0, 10).
inline fairrec::Instance random_instance(fairrec::Rng& rng, std::size_t m,
                                         std::size_t n, bool integer_scores) {
  fairrec::Instance inst;
  inst.customers = m;
  inst.producers = n;
  inst.relevance.resize(m * n);
  for (auto& v : inst.relevance) {
    v = integer_scores ? static_cast<double>(rng.below(10)) : 10.0 * rng.unit();
  }
  return inst;
}

}  // namespace testgen
