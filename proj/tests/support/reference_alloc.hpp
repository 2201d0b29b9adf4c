#pragma once

// Independent trace interpreter for the two-phase allocator, used as an
// oracle. Deliberately written with different machinery than the production
// code (ordered sets, explicit 1-based positions, no shared helpers) so that
// agreement between the two is meaningful.

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace refalloc {

using Matrix = std::vector<std::vector<double>>;

struct GrrOutcome {
  std::vector<std::set<std::uint32_t>> bundles;  // B, customer-indexed
  std::size_t x = 0;                             // 1-based last position
  bool exhausted = false;                        // true: T hit 0
};

// Greedy round robin over ordering sigma (0-based customer ids). copies and
// feasible are taken by reference and mutated, mirroring how the phases
// chain. Ties break toward the lowest product index.
inline GrrOutcome grr(const Matrix& V, std::vector<long long>& copies,
                      long long budget, const std::vector<std::size_t>& sigma,
                      std::vector<std::set<std::uint32_t>>& feasible) {
  const std::size_t m = sigma.size();
  GrrOutcome out;
  out.bundles.assign(V.size(), {});
  out.x = m;
  if (budget <= 0) {
    out.exhausted = true;
    return out;
  }
  while (true) {
    for (std::size_t pos1 = 1; pos1 <= m; ++pos1) {  // 1-based position
      const std::size_t u = sigma[pos1 - 1];
      bool found = false;
      std::uint32_t best = 0;
      double best_score = 0.0;
      for (std::uint32_t p : feasible[u]) {
        if (copies[p] <= 0) continue;
        if (!found || V[u][p] > best_score) {
          found = true;
          best = p;
          best_score = V[u][p];
        }
      }
      if (!found) {
        if (pos1 != 1) out.x = pos1 - 1;
        out.exhausted = false;
        return out;
      }
      out.bundles[u].insert(best);
      feasible[u].erase(best);
      copies[best] -= 1;
      budget -= 1;
      if (budget == 0) {
        out.x = pos1;
        out.exhausted = true;
        return out;
      }
    }
  }
}

struct FairOutcome {
  std::vector<std::set<std::uint32_t>> bundles;
  std::size_t phase1_x = 0;
  bool ran_phase2 = false;
};

// Two-phase run with identity ordering and lowest-index ties.
inline FairOutcome fair_two_phase(const Matrix& V, std::size_t k,
                                  double alpha = 1.0) {
  const std::size_t m = V.size();
  const std::size_t n = V.front().size();

  std::vector<std::set<std::uint32_t>> feasible(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::uint32_t p = 0; p < n; ++p) feasible[u].insert(p);
  }
  std::vector<std::size_t> sigma(m);
  for (std::size_t i = 0; i < m; ++i) sigma[i] = i;

  const auto ell = static_cast<long long>(
      alpha == 1.0 ? (m * k) / n
                   : static_cast<std::size_t>(alpha * double(m * k) / double(n) +
                                              1e-9));
  std::vector<long long> copies(n, ell);

  FairOutcome out;
  GrrOutcome first = grr(V, copies, ell * static_cast<long long>(n), sigma,
                         feasible);
  out.bundles = first.bundles;
  out.phase1_x = first.x;

  const std::size_t x = first.x;
  const std::size_t next_customer = sigma[(x % m + 1) - 1];  // sigma((x mod m)+1)
  std::size_t lambda = out.bundles[next_customer].size();
  if (lambda < k) {
    out.ran_phase2 = true;
    for (auto& c : copies) c = static_cast<long long>(m);
    long long budget = 0;
    if (x < m) {
      std::vector<std::size_t> rotated(m);
      for (std::size_t i = 1; i <= m; ++i) {
        rotated[i - 1] = sigma[((i + x - 1) % m + 1) - 1];
      }
      sigma = rotated;
      budget = static_cast<long long>(m - x);
      lambda += 1;
    }
    budget += static_cast<long long>(m) * static_cast<long long>(k - lambda);
    GrrOutcome second = grr(V, copies, budget, sigma, feasible);
    for (std::size_t u = 0; u < m; ++u) {
      out.bundles[u].insert(second.bundles[u].begin(),
                            second.bundles[u].end());
    }
  }
  return out;
}

}  // namespace refalloc
