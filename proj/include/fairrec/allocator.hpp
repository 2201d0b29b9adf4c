#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairrec/core.hpp"
#include "fairrec/rng.hpp"

// Two-phase fair allocator. Phase 1 caps every product at a copy budget of
// floor(alpha*m*k/n) and serves customers greedily round-robin, which spreads
// exposure across producers; phase 2 lifts the cap and tops every customer up
// to exactly k items, resuming from where phase 1 stopped. The result is
// envy-free up to one item for every customer, gives every producer nonzero
// exposure (when the copy budget is at least 1), and at least n-k producers
// reach the budget.

namespace fairrec {

enum class Termination {
  kExhaustedBudget,    // the call made all `remaining` grants
  kNoFeasibleProduct,  // a customer had no feasible product left
};

// Position bookkeeping follows the round-robin convention: positions in the
// ordering are 1-based and `x` is the position of the last customer served in
// the final round, i.e. the count of customers served in that round. x == m
// also encodes "no one served yet in the current round" (its initial value).
// Arrays themselves are 0-based; conversions happen only at this boundary.
struct PhaseTrace {
  int phase = 0;
  std::size_t rounds = 0;  // value of the round counter at termination
  Termination termination = Termination::kExhaustedBudget;
  std::size_t x_final = 0;  // 1-based position, in [1, m]
};

// Mutable state threaded through greedy_round_robin calls.
struct AllocatorState {
  std::vector<std::uint64_t> copies;   // per-product remaining copy budget (S)
  std::uint64_t remaining = 0;         // grants left in this phase (T)
  std::vector<std::uint8_t> feasible;  // m*n mask; 1 = customer may receive p
  std::vector<std::uint32_t> order;    // customer ordering, 0-based ids
  std::size_t last_position = 0;       // x, 1-based (see PhaseTrace)

  bool is_feasible(std::size_t u, std::size_t p, std::size_t n) const {
    return feasible[u * n + p] != 0;
  }

  static AllocatorState initial(const Instance& inst,
                                std::vector<std::uint32_t> order,
                                std::uint64_t copies_per_product,
                                std::uint64_t remaining);
};

struct GrrDelta {
  std::vector<std::vector<std::uint32_t>> granted;  // per customer, grant order
  PhaseTrace trace;
};

// One greedy round-robin pass: customers are served cyclically in
// state.order; each receives the highest-relevance product among those still
// feasible for them with copies left. Grants update feasibility, copy budget
// and the remaining count in place. `partial` is the allocation accumulated
// so far and is used only to verify state consistency on entry.
GrrDelta greedy_round_robin(const Instance& inst, AllocatorState& state,
                            const Allocation& partial, TieBreak tie_break,
                            Rng* tie_rng = nullptr);

struct FairRecResult {
  Allocation allocation;
  PhaseTrace phase1;
  std::optional<PhaseTrace> phase2;  // absent if phase 1 already filled everyone
};

FairRecResult fairrec(const Instance& inst, const RunConfig& cfg);

// Producer-side maximin share over m*k uniform exposure slots: floor(m*k/n).
std::uint64_t producer_mms_threshold(std::uint64_t m, std::uint64_t n,
                                     std::uint64_t k);

// The phase-1 copy budget floor(alpha*m*k/n); equals the MMS threshold at
// alpha = 1 (computed in exact integer arithmetic for that case).
std::uint64_t exposure_guarantee(std::uint64_t m, std::uint64_t n,
                                 std::uint64_t k, double alpha);

}  // namespace fairrec
