#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "fairrec/allocator.hpp"
#include "fairrec/baselines.hpp"
#include "fairrec/core.hpp"
#include "support/reference_alloc.hpp"
#include "support/test_instances.hpp"

using namespace fairrec;

namespace {

Instance from_rows(const std::vector<std::vector<double>>& rows) {
  Instance inst;
  inst.customers = rows.size();
  inst.producers = rows.front().size();
  for (const auto& row : rows) {
    inst.relevance.insert(inst.relevance.end(), row.begin(), row.end());
  }
  return inst;
}

std::set<std::uint32_t> as_set(const std::vector<std::uint32_t>& bundle) {
  return {bundle.begin(), bundle.end()};
}

AllocatorState fresh_state(const Instance& inst, std::uint64_t copies,
                           std::uint64_t remaining) {
  std::vector<std::uint32_t> order(inst.customers);
  std::iota(order.begin(), order.end(), 0u);
  return AllocatorState::initial(inst, std::move(order), copies, remaining);
}

}  // namespace

TEST_CASE("greedy round robin reproduces the two-customer trace") {
  const auto inst = from_rows({{3, 2, 1}, {1, 2, 3}});

  // Independent interpreter first.
  const refalloc::Matrix rows{{3, 2, 1}, {1, 2, 3}};
  std::vector<long long> copies{1, 1, 1};
  std::vector<std::set<std::uint32_t>> feasible{{0, 1, 2}, {0, 1, 2}};
  const auto expected = refalloc::grr(rows, copies, 3, {0, 1}, feasible);
  CHECK(expected.bundles[0] == std::set<std::uint32_t>{0, 1});
  CHECK(expected.bundles[1] == std::set<std::uint32_t>{2});
  CHECK(expected.x == 1);
  CHECK(expected.exhausted);

  auto state = fresh_state(inst, 1, 3);
  const auto delta = greedy_round_robin(inst, state, Allocation::empty(2),
                                        TieBreak::kLowestIndex);
  CHECK(as_set(delta.granted[0]) == expected.bundles[0]);
  CHECK(as_set(delta.granted[1]) == expected.bundles[1]);
  CHECK(delta.trace.x_final == 1);
  CHECK(delta.trace.termination == Termination::kExhaustedBudget);
  CHECK(delta.trace.rounds == 2);
  CHECK(state.remaining == 0);
}

TEST_CASE("greedy round robin with zero budget grants nothing") {
  const auto inst = from_rows({{3, 2, 1}, {1, 2, 3}});
  auto state = fresh_state(inst, 1, 0);
  const auto delta = greedy_round_robin(inst, state, Allocation::empty(2),
                                        TieBreak::kLowestIndex);
  CHECK(delta.granted[0].empty());
  CHECK(delta.granted[1].empty());
  CHECK(delta.trace.x_final == 2);  // initialization value m
  CHECK(delta.trace.rounds == 0);
}

TEST_CASE("single customer takes products in descending relevance") {
  const auto inst = from_rows({{5, 1}});
  auto state = fresh_state(inst, 1, 2);
  const auto delta = greedy_round_robin(inst, state, Allocation::empty(1),
                                        TieBreak::kLowestIndex);
  CHECK(delta.granted[0] == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("infeasibility at the first position keeps x at m") {
  const auto inst = from_rows({{5, 1}});
  auto state = fresh_state(inst, 1, 3);  // budget exceeds feasible grants
  const auto delta = greedy_round_robin(inst, state, Allocation::empty(1),
                                        TieBreak::kLowestIndex);
  CHECK(delta.granted[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(delta.trace.termination == Termination::kNoFeasibleProduct);
  CHECK(delta.trace.x_final == 1);  // m == 1: kept from initialization
}

TEST_CASE("inconsistent entry state is rejected") {
  const auto inst = from_rows({{3, 2, 1}, {1, 2, 3}});
  auto state = fresh_state(inst, 1, 3);

  SUBCASE("bad ordering") {
    state.order = {0, 0};
    CHECK_THROWS_AS(greedy_round_robin(inst, state, Allocation::empty(2),
                                       TieBreak::kLowestIndex),
                    Error);
  }
  SUBCASE("held product still feasible") {
    Allocation partial = Allocation::empty(2);
    partial.bundles[0] = {1};  // state says 1 is still feasible for 0
    CHECK_THROWS_AS(
        greedy_round_robin(inst, state, partial, TieBreak::kLowestIndex),
        Error);
  }
  SUBCASE("wrong copy vector size") {
    state.copies.pop_back();
    CHECK_THROWS_AS(greedy_round_robin(inst, state, Allocation::empty(2),
                                       TieBreak::kLowestIndex),
                    Error);
  }
}

TEST_CASE("two-phase fixture: m=2 n=3 k=2") {
  const refalloc::Matrix rows{{3, 2, 1}, {1, 2, 3}};
  const auto inst = from_rows(rows);

  // Re-derive with the independent interpreter.
  const auto expected = refalloc::fair_two_phase(rows, 2, 1.0);
  CHECK(expected.bundles[0] == std::set<std::uint32_t>{0, 1});
  CHECK(expected.bundles[1] == std::set<std::uint32_t>{1, 2});
  CHECK(expected.phase1_x == 1);
  CHECK(expected.ran_phase2);

  RunConfig cfg;
  cfg.k = 2;
  const auto result = fairrec::fairrec(inst, cfg);

  // Frozen hand-traced values, bit-exact grant order included.
  CHECK(result.allocation.bundles[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(result.allocation.bundles[1] == std::vector<std::uint32_t>{2, 1});
  CHECK(result.phase1.x_final == 1);
  CHECK(result.phase1.termination == Termination::kExhaustedBudget);
  REQUIRE(result.phase2.has_value());
  CHECK(result.phase2->x_final == 1);

  const auto exposure = exposure_of(result.allocation, 3);
  CHECK(exposure.counts == std::vector<std::uint64_t>{1, 2, 1});
}

TEST_CASE("two-phase output matches the reference interpreter") {
  Rng rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const auto [m, n, k] = testgen::random_params(rng);
    const auto inst = testgen::random_instance(rng, m, n, trial % 2 == 0);
    const double alpha = std::vector<double>{1.0, 0.0, 0.3, 0.7}[trial % 4];

    refalloc::Matrix rows(m, std::vector<double>(n));
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t p = 0; p < n; ++p) rows[u][p] = inst.score(u, p);
    }
    const auto expected = refalloc::fair_two_phase(rows, k, alpha);

    RunConfig cfg;
    cfg.k = k;
    cfg.alpha = alpha;
    const auto result = fairrec::fairrec(inst, cfg);

    for (std::size_t u = 0; u < m; ++u) {
      REQUIRE(as_set(result.allocation.bundles[u]) == expected.bundles[u]);
    }
  }
}

TEST_CASE("alpha 0 degenerates to per-customer top-k") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [m, n, k] = testgen::random_params(rng);
    const auto inst = testgen::random_instance(rng, m, n, false);
    RunConfig cfg;
    cfg.k = k;
    cfg.alpha = 0.0;
    const auto result = fairrec::fairrec(inst, cfg);
    const auto reference = top_k(inst, k);
    for (std::size_t u = 0; u < m; ++u) {
      CHECK(result.allocation.bundles[u] == reference.bundles[u]);
    }
  }
}

TEST_CASE("every customer ends with exactly k distinct products") {
  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [m, n, k] = testgen::random_params(rng);
    const auto inst = testgen::random_instance(rng, m, n, trial % 2 == 0);
    RunConfig cfg;
    cfg.k = k;
    if (trial % 3 == 0) cfg.ordering_seed = trial;
    const auto result = fairrec::fairrec(inst, cfg);
    for (const auto& bundle : result.allocation.bundles) {
      REQUIRE(bundle.size() == k);
      auto sorted = bundle;
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) ==
              sorted.end());
      REQUIRE(sorted.back() < n);
    }
  }
}

TEST_CASE("round robin properties P1, P3, P4") {
  Rng rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [m, n, k] = testgen::random_params(rng);
    const auto inst = testgen::random_instance(rng, m, n, trial % 2 == 0);

    const auto copies = producer_mms_threshold(m, n, k);  // >= 1 in-regime
    auto state = fresh_state(inst, copies, copies * n);
    Rng order_rng(trial);
    order_rng.shuffle(std::span<std::uint32_t>(state.order));
    const auto sigma = state.order;
    const auto delta = greedy_round_robin(inst, state, Allocation::empty(m),
                                          TieBreak::kLowestIndex);

    // P4: bundle sizes differ by at most one.
    std::size_t smallest = k + 1, largest = 0;
    for (const auto& bundle : delta.granted) {
      smallest = std::min(smallest, bundle.size());
      largest = std::max(largest, bundle.size());
    }
    REQUIRE(largest - smallest <= 1);

    for (std::size_t i = 0; i < m; ++i) {
      const auto& bundle = delta.granted[sigma[i]];
      // P3: no duplicates within a bundle.
      auto sorted = bundle;
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) ==
              sorted.end());
      // P1: earlier positions never envy later ones (grant-order sums).
      for (std::size_t j = i + 1; j < m; ++j) {
        double own = 0.0, other = 0.0;
        for (auto p : bundle) own += inst.score(sigma[i], p);
        for (auto p : delta.granted[sigma[j]]) {
          other += inst.score(sigma[i], p);
        }
        REQUIRE(own >= other);
      }
    }
  }
}

TEST_CASE("fixed configuration reproduces bit-identical allocations") {
  Rng rng(9001);
  const auto inst = testgen::random_instance(rng, 20, 30, false);
  RunConfig cfg;
  cfg.k = 4;
  cfg.ordering_seed = 17;
  cfg.tie_break = TieBreak::kSeededRandom;
  const auto a = fairrec::fairrec(inst, cfg);
  const auto b = fairrec::fairrec(inst, cfg);
  CHECK(a.allocation.bundles == b.allocation.bundles);
}

TEST_CASE("mms threshold values") {
  CHECK(producer_mms_threshold(2, 3, 2) == 1);
  CHECK(producer_mms_threshold(1892, 17632, 9) == 0);
  CHECK(producer_mms_threshold(1892, 17632, 10) == 1);
  CHECK(producer_mms_threshold(1892, 17632, 18) == 1);
}

TEST_CASE("exposure guarantee scales with alpha") {
  CHECK(exposure_guarantee(2, 3, 2, 1.0) == 1);
  CHECK(exposure_guarantee(2, 3, 2, 0.0) == 0);
  CHECK(exposure_guarantee(2, 3, 2, 0.5) == 0);  // floor(0.666)
  // 0.3 * 10000 / 300 is exactly 10; binary rounding must not lose it.
  CHECK(exposure_guarantee(500, 300, 20, 0.3) == 10);
  CHECK(exposure_guarantee(500, 300, 20, 0.7) == 23);  // floor(23.33)
}

TEST_CASE("fairrec propagates validation errors") {
  const auto inst = from_rows({{1, 2, 3}, {1, 2, 3}});
  RunConfig cfg;
  cfg.k = 3;  // k == n
  CHECK_THROWS_AS(fairrec::fairrec(inst, cfg), Error);
}
