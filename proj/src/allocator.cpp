#include "fairrec/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairrec/log.hpp"

namespace fairrec {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Linear argmax over the customer's feasible products with copies left.
// Ties are exact score equalities; kSeededRandom picks uniformly among the
// tied candidates via reservoir sampling on the tie stream.
std::size_t pick_product(const Instance& inst, const AllocatorState& state,
                         std::size_t u, TieBreak tie_break, Rng* tie_rng) {
  const std::size_t n = inst.producers;
  const double* row = inst.relevance.data() + u * n;
  const std::uint8_t* feasible = state.feasible.data() + u * n;

  std::size_t best = kNone;
  double best_score = 0.0;
  std::uint64_t tie_count = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (feasible[p] == 0 || state.copies[p] == 0) continue;
    const double score = row[p];
    if (best == kNone || score > best_score) {
      best = p;
      best_score = score;
      tie_count = 1;
    } else if (score == best_score && tie_break == TieBreak::kSeededRandom) {
      ++tie_count;
      if (tie_rng->below(tie_count) == 0) best = p;
    }
  }
  return best;
}

void check_entry_state(const Instance& inst, const AllocatorState& state,
                       const Allocation& partial) {
  const std::size_t m = inst.customers;
  const std::size_t n = inst.producers;
  if (state.copies.size() != n) {
    raise(ErrorCode::InconsistentState,
          "copy budget has " + std::to_string(state.copies.size()) +
              " entries, expected " + std::to_string(n));
  }
  if (state.feasible.size() != m * n) {
    raise(ErrorCode::InconsistentState,
          "feasible mask has " + std::to_string(state.feasible.size()) +
              " entries, expected " + std::to_string(m * n));
  }
  if (state.order.size() != m) {
    raise(ErrorCode::InconsistentState,
          "ordering has " + std::to_string(state.order.size()) +
              " entries, expected " + std::to_string(m));
  }
  std::vector<std::uint8_t> seen(m, 0);
  for (std::uint32_t u : state.order) {
    if (u >= m || seen[u]) {
      raise(ErrorCode::InconsistentState,
            "ordering is not a permutation of the customers");
    }
    seen[u] = 1;
  }
  if (partial.bundles.size() != m) {
    raise(ErrorCode::InconsistentState,
          "partial allocation has " + std::to_string(partial.bundles.size()) +
              " bundles, expected " + std::to_string(m));
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::uint32_t p : partial.bundles[u]) {
      if (p >= n || state.is_feasible(u, p, n)) {
        raise(ErrorCode::InconsistentState,
              "customer " + std::to_string(u) + " already holds product " +
                  std::to_string(p) + " but it is still marked feasible");
      }
    }
  }
}

}  // namespace

AllocatorState AllocatorState::initial(const Instance& inst,
                                       std::vector<std::uint32_t> order,
                                       std::uint64_t copies_per_product,
                                       std::uint64_t remaining) {
  AllocatorState state;
  state.copies.assign(inst.producers, copies_per_product);
  state.remaining = remaining;
  state.feasible.assign(inst.customers * inst.producers, 1);
  state.order = std::move(order);
  state.last_position = inst.customers;
  return state;
}

GrrDelta greedy_round_robin(const Instance& inst, AllocatorState& state,
                            const Allocation& partial, TieBreak tie_break,
                            Rng* tie_rng) {
  check_entry_state(inst, state, partial);

  const std::size_t m = inst.customers;
  const std::size_t n = inst.producers;

  GrrDelta delta;
  delta.granted.resize(m);

  std::size_t x = m;
  std::size_t rounds = 0;
  Termination termination = Termination::kExhaustedBudget;

  if (state.remaining > 0) {
    bool done = false;
    while (!done) {
      ++rounds;
      for (std::size_t pos = 0; pos < m; ++pos) {
        const std::size_t u = state.order[pos];
        const std::size_t p = pick_product(inst, state, u, tie_break, tie_rng);
        if (p == kNone) {
          if (pos != 0) {
            x = pos;  // 1-based position of the last served customer
          } else {
            log_debug("round-robin found no feasible product at the first "
                      "position; last position stays at " +
                      std::to_string(m));
          }
          termination = Termination::kNoFeasibleProduct;
          done = true;
          break;
        }
        delta.granted[u].push_back(static_cast<std::uint32_t>(p));
        state.feasible[u * n + p] = 0;
        --state.copies[p];
        --state.remaining;
        if (state.remaining == 0) {
          x = pos + 1;
          termination = Termination::kExhaustedBudget;
          done = true;
          break;
        }
      }
    }
  }

  state.last_position = x;
  delta.trace.rounds = rounds;
  delta.trace.termination = termination;
  delta.trace.x_final = x;
  return delta;
}

FairRecResult fairrec(const Instance& inst, const RunConfig& cfg) {
  validate_instance(inst, cfg);

  const std::size_t m = inst.customers;
  const std::size_t n = inst.producers;
  const std::size_t k = cfg.k;

  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  if (cfg.ordering_seed) {
    Rng rng(derive_seed(*cfg.ordering_seed, StreamPurpose::kOrdering));
    rng.shuffle(std::span<std::uint32_t>(order));
  }

  std::optional<Rng> tie_rng;
  if (cfg.tie_break == TieBreak::kSeededRandom) {
    tie_rng.emplace(derive_seed(cfg.ordering_seed.value_or(0),
                                StreamPurpose::kTieBreak));
  }
  Rng* ties = tie_rng ? &*tie_rng : nullptr;

  const std::uint64_t copies = exposure_guarantee(m, n, k, cfg.alpha);
  AllocatorState state =
      AllocatorState::initial(inst, std::move(order), copies, copies * n);

  FairRecResult result;
  result.allocation = Allocation::empty(m);

  auto merge = [&result](const GrrDelta& delta) {
    for (std::size_t u = 0; u < delta.granted.size(); ++u) {
      auto& bundle = result.allocation.bundles[u];
      bundle.insert(bundle.end(), delta.granted[u].begin(),
                    delta.granted[u].end());
    }
  };

  GrrDelta first = greedy_round_robin(inst, state, result.allocation,
                                      cfg.tie_break, ties);
  merge(first);
  result.phase1 = first.trace;
  result.phase1.phase = 1;

  const std::size_t x = state.last_position;
  // The customer right after position x holds the smallest bundle.
  const std::size_t next_u = state.order[x % m];
  std::size_t bundle_floor = result.allocation.bundles[next_u].size();

  if (bundle_floor < k) {
    std::fill(state.copies.begin(), state.copies.end(), m);
    std::uint64_t remaining = 0;
    if (x < m) {
      // Resume where phase 1 stopped: the x-rotated ordering serves the
      // shorter bundles first, and the first m-x grants even everyone out.
      std::rotate(state.order.begin(), state.order.begin() + x,
                  state.order.end());
      remaining = m - x;
      ++bundle_floor;
    }
    remaining += static_cast<std::uint64_t>(m) * (k - bundle_floor);
    state.remaining = remaining;

    GrrDelta second = greedy_round_robin(inst, state, result.allocation,
                                         cfg.tie_break, ties);
    merge(second);
    second.trace.phase = 2;
    result.phase2 = second.trace;
  }

  return result;
}

std::uint64_t producer_mms_threshold(std::uint64_t m, std::uint64_t n,
                                     std::uint64_t k) {
  return (m * k) / n;
}

std::uint64_t exposure_guarantee(std::uint64_t m, std::uint64_t n,
                                 std::uint64_t k, double alpha) {
  if (alpha == 1.0) return producer_mms_threshold(m, n, k);
  if (alpha == 0.0) return 0;
  // The 1e-9 nudge keeps decimal alpha values (0.3 * 10000/300 and the like)
  // from landing an ulp below the intended integer.
  const long double slots = static_cast<long double>(m) * k;
  return static_cast<std::uint64_t>(
      std::floor(static_cast<long double>(alpha) * slots / n + 1e-9L));
}

}  // namespace fairrec
