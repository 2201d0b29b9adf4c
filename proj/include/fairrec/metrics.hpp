#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairrec/core.hpp"

namespace fairrec {

// Evaluation results for one (instance, strategy, k, alpha, seed) run.
// H: fraction of producers whose exposure meets the guarantee.
// Z: entropy-normalized exposure equality (1 = perfectly equal).
// L: mean per-producer exposure loss relative to the top-k reference.
// Y: mean average envy between customers.
// mu_phi / std_phi: population mean and standard deviation of the
// normalized per-customer utilities.
struct FairnessReport {
  std::string strategy;
  std::size_t k = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  double H = 0.0;
  double Z = 0.0;
  double L = 0.0;
  double Y = 0.0;
  double mu_phi = 0.0;
  double std_phi = 0.0;
  std::uint64_t exposure_guarantee_used = 0;
  std::size_t producers_satisfied = 0;
};

// Fraction of producers with exposure >= guarantee.
double metric_H(std::span<const std::uint64_t> exposures,
                std::uint64_t guarantee);

// -sum_p (E_p/mk) log_n (E_p/mk) over producers with nonzero exposure, where
// n = exposures.size(); zero-exposure producers contribute 0 (entropy limit).
// Requires n >= 2. Throws EmptyExposure when no exposure was handed out.
double metric_Z(std::span<const std::uint64_t> exposures, std::uint64_t m,
                std::uint64_t k);

// Mean relative exposure loss vs. the top-k reference, gains clamped to 0;
// producers the reference never exposed contribute 0.
double metric_L(std::span<const std::uint64_t> method_exposures,
                std::span<const std::uint64_t> topk_exposures);

// Mean over customers of the average utility they would gain by swapping
// bundles with someone else (clamped at 0). Defined as 0 for m = 1.
double metric_Y(const Instance& inst, const Allocation& alloc, std::size_t k);

// Normalized utility of the own bundle, one entry per customer.
std::vector<double> per_customer_utilities(const Instance& inst,
                                           const Allocation& alloc,
                                           std::size_t k);

// Population mean and population standard deviation of the utilities.
std::pair<double, double> utility_stats(const Instance& inst,
                                        const Allocation& alloc,
                                        std::size_t k);

// Exposure Lorenz curve: producers sorted by ascending exposure, n+1 points
// (cumulative producer fraction, cumulative exposure fraction) from (0,0) to
// (1,1). Throws EmptyExposure when total exposure is 0.
std::vector<std::pair<double, double>> lorenz_series(
    std::span<const std::uint64_t> exposures);

// Per-customer utilities sorted ascending, for distribution plots.
std::vector<double> utility_cdf_series(const Instance& inst,
                                       const Allocation& alloc, std::size_t k);

}  // namespace fairrec
