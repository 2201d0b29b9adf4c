#include <doctest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "fairrec/core.hpp"
#include "fairrec/rng.hpp"
#include "support/test_instances.hpp"

using namespace fairrec;

namespace {

Instance make_instance(std::size_t m, std::size_t n,
                       std::vector<double> relevance) {
  Instance inst;
  inst.customers = m;
  inst.producers = n;
  inst.relevance = std::move(relevance);
  return inst;
}

RunConfig make_config(std::size_t k, double alpha = 1.0) {
  RunConfig cfg;
  cfg.k = k;
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace

TEST_CASE("validate_instance accepts the all-zero boundary case") {
  const auto inst = make_instance(2, 3, std::vector<double>(6, 0.0));
  CHECK_NOTHROW(validate_instance(inst, make_config(2, 1.0)));
}

TEST_CASE("validate_instance rejects out-of-regime configurations") {
  const auto inst = make_instance(2, 5, std::vector<double>(10, 1.0));
  try {
    validate_instance(inst, make_config(2));  // n=5 > m*k=4
    FAIL("expected TooFewSlots");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSlots);
  }

  const auto inst3 = make_instance(2, 3, std::vector<double>(6, 1.0));
  try {
    validate_instance(inst3, make_config(3));  // k == n excluded
    FAIL("expected KOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KOutOfRange);
  }
  try {
    validate_instance(inst3, make_config(0));
    FAIL("expected KOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KOutOfRange);
  }
}

TEST_CASE("validate_instance rejects bad relevance entries and alpha") {
  auto inst = make_instance(2, 3, std::vector<double>(6, 1.0));
  inst.relevance[4] = -0.5;
  try {
    validate_instance(inst, make_config(2));
    FAIL("expected NegativeRelevance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeRelevance);
  }

  inst.relevance[4] = std::numeric_limits<double>::infinity();
  try {
    validate_instance(inst, make_config(2));
    FAIL("expected NonFiniteRelevance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteRelevance);
  }

  inst.relevance[4] = 1.0;
  try {
    validate_instance(inst, make_config(2, 1.5));
    FAIL("expected AlphaOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphaOutOfRange);
  }

  inst.relevance.pop_back();
  try {
    validate_instance(inst, make_config(2));
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("exposure_of counts bundle membership") {
  Allocation alloc;
  alloc.bundles = {{0, 1}, {1, 2}};
  const auto exposure = exposure_of(alloc, 3);
  CHECK(exposure.counts == std::vector<std::uint64_t>{1, 2, 1});

  Allocation empty;
  empty.bundles = {{}, {}};
  CHECK(exposure_of(empty, 3).counts == std::vector<std::uint64_t>{0, 0, 0});

  Allocation bad;
  bad.bundles = {{3}};
  CHECK_THROWS_AS(exposure_of(bad, 3), Error);
}

TEST_CASE("exposure totals m*k for identical complete bundles") {
  Allocation alloc;
  const std::size_t m = 7, k = 3;
  for (std::size_t u = 0; u < m; ++u) alloc.bundles.push_back({0, 1, 2});
  CHECK(exposure_of(alloc, 5).total() == m * k);
}

TEST_CASE("utility_of evaluates the normalized utility") {
  const auto inst = make_instance(1, 3, {3, 2, 1});
  const std::vector<std::uint32_t> top{0, 1};
  CHECK(utility_of(inst, 0, top, 2) == 1.0);

  const std::vector<std::uint32_t> other{1, 2};
  CHECK(utility_of(inst, 0, other, 2) == doctest::Approx(0.6));

  const auto zeros = make_instance(1, 3, {0, 0, 0});
  CHECK(utility_of(zeros, 0, top, 2) == 1.0);
}

TEST_CASE("utility_of properties on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [m, n, k] = testgen::random_params(rng);
    const auto inst =
        testgen::random_instance(rng, m, n, trial % 2 == 0);
    const auto u = rng.below(m);

    // monotone under adding a product
    std::vector<std::uint32_t> bundle =
        Rng(trial).sample_without_replacement(static_cast<std::uint32_t>(n),
                                              static_cast<std::uint32_t>(k - 1));
    const double before = utility_of(inst, u, bundle, k);
    for (std::uint32_t p = 0; p < n; ++p) {
      if (std::find(bundle.begin(), bundle.end(), p) == bundle.end()) {
        bundle.push_back(p);
        break;
      }
    }
    const double after = utility_of(inst, u, bundle, k);
    CHECK(after >= before);
    CHECK(before >= 0.0);
    CHECK(after <= 1.0 + 1e-12);

    // own top-k scores exactly 1 whenever the top-k mass is nonzero
    TopKCache cache(inst, k);
    if (cache.top_sum(u) > 0.0) {
      CHECK(utility_of(inst, u, cache.indices(u), k) == 1.0);
    }
  }
}

TEST_CASE("TopKCache matches utility_of") {
  Rng rng(99);
  const auto inst = testgen::random_instance(rng, 6, 9, false);
  TopKCache cache(inst, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto bundle = rng.sample_without_replacement(9, 3);
    CHECK(cache.utility(2, bundle) ==
          doctest::Approx(utility_of(inst, 2, bundle, 3)).epsilon(1e-12));
  }
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::kFairRec, Strategy::kTopK, Strategy::kRandomK,
                     Strategy::kMixedK, Strategy::kPoorestK}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(!parse_strategy("nope").has_value());
}
