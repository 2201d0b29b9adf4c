#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairrec/core.hpp"

// Independent verification layer: exact EF1 checking over raw relevance
// sums, envy matrices, brute-force maximin shares at toy scale, and the
// guarantee audit used by tests and the CLI.

namespace fairrec {

struct Ef1Witness {
  std::size_t envious = 0;  // u
  std::size_t envied = 0;   // w
  double margin = 0.0;      // V_u(A_w) - max_item - V_u(A_u), > tolerance
};

// True iff for every ordered customer pair (u, w):
//   V_u(A_u) >= V_u(A_w) - max_{p in A_w} V_u(p)  (within `tolerance`).
// Raw relevance sums are used; the per-customer normalization is a positive
// scalar and cannot change any comparison. Empty bundles are trivially fine.
std::pair<bool, std::optional<Ef1Witness>> check_ef1(const Instance& inst,
                                                     const Allocation& alloc,
                                                     double tolerance = 1e-9);

// Entry (u, w) = max(phi_u(R_w) - phi_u(R_u), 0), row-major m x m.
std::vector<double> envy_matrix(const Instance& inst, const Allocation& alloc,
                                std::size_t k);

// Exact per-agent maximin share by exhaustive set-partition enumeration
// (restricted-growth strings, partitions padded with empty bundles).
// valuation_rows[a][i] is agent a's value for item i; all rows must have the
// same length. Limits: items <= 10 and agents <= 4, else TooLarge.
std::vector<double> brute_force_mms(
    std::span<const std::vector<double>> valuation_rows,
    std::size_t agents);

// The guarantee block a strategy promises for a given run. Only the
// two-phase allocator carries one; at copy budget 0 the nonzero-exposure
// clause drops out.
struct GuaranteeContract {
  bool applies = false;
  std::uint64_t exposure_floor = 0;   // floor(alpha*m*k/n)
  std::size_t min_satisfied = 0;      // n - k
  bool require_nonzero_exposure = false;
};

struct AuditResult {
  bool ef1_holds = false;
  std::optional<Ef1Witness> ef1_witness;  // present iff ef1_holds is false
  bool exactly_k = false;
  std::size_t mms_satisfied_count = 0;  // producers with exposure >= floor
  bool nonzero_exposure = false;
  GuaranteeContract guarantees_expected;

  bool guarantees_hold() const {
    if (!guarantees_expected.applies) return true;
    if (!ef1_holds || !exactly_k) return false;
    if (mms_satisfied_count < guarantees_expected.min_satisfied) return false;
    if (guarantees_expected.require_nonzero_exposure && !nonzero_exposure) {
      return false;
    }
    return true;
  }
};

AuditResult audit_run(const Instance& inst, const RunConfig& cfg,
                      const Allocation& alloc, Strategy strategy);

}  // namespace fairrec
