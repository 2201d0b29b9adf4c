#include "fairrec/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace fairrec {

double metric_H(std::span<const std::uint64_t> exposures,
                std::uint64_t guarantee) {
  if (exposures.empty()) raise(ErrorCode::EmptyExposure, "no producers");
  std::size_t satisfied = 0;
  for (auto e : exposures) {
    if (e >= guarantee) ++satisfied;
  }
  return static_cast<double>(satisfied) / static_cast<double>(exposures.size());
}

double metric_Z(std::span<const std::uint64_t> exposures, std::uint64_t m,
                std::uint64_t k) {
  const std::size_t n = exposures.size();
  assert(n >= 2);
  const double slots = static_cast<double>(m) * static_cast<double>(k);
  if (slots <= 0.0) raise(ErrorCode::EmptyExposure, "m*k slots is zero");
  std::uint64_t total = 0;
  for (auto e : exposures) total += e;
  if (total == 0) raise(ErrorCode::EmptyExposure, "all exposures are zero");

  const double log_n = std::log(static_cast<double>(n));
  double z = 0.0;
  for (auto e : exposures) {
    if (e == 0) continue;
    const double share = static_cast<double>(e) / slots;
    z -= share * (std::log(share) / log_n);
  }
  return std::clamp(z, 0.0, 1.0);
}

double metric_L(std::span<const std::uint64_t> method_exposures,
                std::span<const std::uint64_t> topk_exposures) {
  if (method_exposures.size() != topk_exposures.size()) {
    raise(ErrorCode::LengthMismatch,
          "exposure vectors have sizes " +
              std::to_string(method_exposures.size()) + " and " +
              std::to_string(topk_exposures.size()));
  }
  if (method_exposures.empty()) {
    raise(ErrorCode::EmptyExposure, "no producers");
  }
  double loss = 0.0;
  for (std::size_t p = 0; p < topk_exposures.size(); ++p) {
    const auto reference = topk_exposures[p];
    if (reference == 0) continue;  // nothing to lose
    if (method_exposures[p] >= reference) continue;
    loss += static_cast<double>(reference - method_exposures[p]) /
            static_cast<double>(reference);
  }
  return std::clamp(loss / static_cast<double>(topk_exposures.size()), 0.0,
                    1.0);
}

double metric_Y(const Instance& inst, const Allocation& alloc, std::size_t k) {
  const std::size_t m = inst.customers;
  if (m <= 1) return 0.0;

  TopKCache cache(inst, k);
  double total = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    const double own = cache.utility(u, alloc.bundles[u]);
    double envy = 0.0;
    for (std::size_t w = 0; w < m; ++w) {
      if (w == u) continue;
      const double other = cache.utility(u, alloc.bundles[w]);
      if (other > own) envy += other - own;
    }
    total += envy / static_cast<double>(m - 1);
  }
  return total / static_cast<double>(m);
}

std::vector<double> per_customer_utilities(const Instance& inst,
                                           const Allocation& alloc,
                                           std::size_t k) {
  TopKCache cache(inst, k);
  std::vector<double> utilities(inst.customers);
  for (std::size_t u = 0; u < inst.customers; ++u) {
    utilities[u] = cache.utility(u, alloc.bundles[u]);
  }
  return utilities;
}

std::pair<double, double> utility_stats(const Instance& inst,
                                        const Allocation& alloc,
                                        std::size_t k) {
  const auto utilities = per_customer_utilities(inst, alloc, k);
  const double m = static_cast<double>(utilities.size());
  double mean = 0.0;
  for (double phi : utilities) mean += phi;
  mean /= m;
  double variance = 0.0;
  for (double phi : utilities) variance += (phi - mean) * (phi - mean);
  variance /= m;
  return {std::clamp(mean, 0.0, 1.0), std::sqrt(variance)};
}

std::vector<std::pair<double, double>> lorenz_series(
    std::span<const std::uint64_t> exposures) {
  const std::size_t n = exposures.size();
  std::uint64_t total = 0;
  for (auto e : exposures) total += e;
  if (n == 0 || total == 0) {
    raise(ErrorCode::EmptyExposure, "total exposure is zero");
  }

  std::vector<std::uint64_t> sorted(exposures.begin(), exposures.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::pair<double, double>> series;
  series.reserve(n + 1);
  series.emplace_back(0.0, 0.0);
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += sorted[i];
    series.emplace_back(static_cast<double>(i + 1) / static_cast<double>(n),
                        static_cast<double>(cumulative) /
                            static_cast<double>(total));
  }
  return series;
}

std::vector<double> utility_cdf_series(const Instance& inst,
                                       const Allocation& alloc,
                                       std::size_t k) {
  auto utilities = per_customer_utilities(inst, alloc, k);
  std::sort(utilities.begin(), utilities.end());
  return utilities;
}

}  // namespace fairrec
