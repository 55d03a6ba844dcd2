#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "symgames/combinatorics.hpp"
#include "symgames/errors.hpp"

using namespace symgames;
using namespace symgames::combinatorics;

namespace {

// Independent oracle: count vectors of a given sum by direct recursion.
std::int64_t count_vectors_brute(std::int64_t total, std::int64_t length) {
  if (length == 1) return 1;
  std::int64_t n = 0;
  for (std::int64_t k = 0; k <= total; ++k) n += count_vectors_brute(total - k, length - 1);
  return n;
}

}  // namespace

TEST_CASE("multinomial matches the worked-example repeats") {
  CHECK(multinomial(CountVector{2, 0, 0}) == 1);
  CHECK(multinomial(CountVector{1, 1, 0}) == 2);
  CHECK(multinomial(CountVector{1, 0, 1}) == 2);
  CHECK(multinomial(CountVector{0, 2, 0}) == 1);
  CHECK(multinomial(CountVector{0, 1, 1}) == 2);
  CHECK(multinomial(CountVector{0, 0, 2}) == 1);
}

TEST_CASE("multinomial empty-product identity") {
  CHECK(multinomial(CountVector{0, 0}) == 1);
  CHECK(multinomial(CountVector{0}) == 1);
}

TEST_CASE("multinomial overflows for 32 opponents on 5 actions") {
  CHECK_THROWS_AS(multinomial(CountVector{6, 6, 6, 7, 7}), OverflowError);
}

TEST_CASE("multinomial rejects negative counts") {
  CHECK_THROWS_AS(multinomial(CountVector{1, -1}), InvalidArgument);
}

TEST_CASE("multinomial near the 64-bit boundary") {
  // C(66,33) fits, C(67,33) does not.
  CHECK(binomial(66, 33) == INT64_C(7219428434016265740));
  CHECK_THROWS_AS(binomial(67, 33), OverflowError);
  CHECK(multinomial(CountVector{33, 33}) == INT64_C(7219428434016265740));
  CHECK_THROWS_AS(multinomial(CountVector{34, 33}), OverflowError);
}

TEST_CASE("log_multinomial agrees with the exact value") {
  CHECK(log_multinomial(CountVector{2, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(log_multinomial(CountVector{1, 1, 0}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(log_multinomial(CountVector{1, 1, 1}) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("log_multinomial cross-checks multinomial wherever it fits") {
  for (std::int64_t p = 1; p <= 9; ++p) {
    for_each_count_vector(p, 4, [&](const CountVector& c) {
      const double lm = log_multinomial(c);
      const double exact = static_cast<double>(multinomial(c));
      CHECK(std::exp(lm) == doctest::Approx(exact).epsilon(1e-12));
    });
  }
  // Large counts stay finite on the log path.
  CHECK(std::isfinite(log_multinomial(CountVector{100, 100, 100, 100})));
}

TEST_CASE("num_profiles") {
  CHECK(num_profiles(3, 3) == 10);
  CHECK(num_profiles(7, 1) == 1);
  CHECK(num_profiles(2, 2) == 3);  // {(2,0),(1,1),(0,2)}
  CHECK(num_profiles(2, 2) == count_vectors_brute(2, 2));
}

TEST_CASE("num_configs") {
  CHECK(num_configs(3, 3) == 6);
  CHECK(num_configs(1, 5) == 1);
  CHECK(num_configs(4, 3) == 10);
  CHECK(num_configs(4, 3) == count_vectors_brute(3, 3));
}

TEST_CASE("enumerate_configs canonical order") {
  const std::vector<CountVector> expected = {
      {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  CHECK(enumerate_configs(3, 3) == expected);
  CHECK(enumerate_configs(1, 3) == std::vector<CountVector>{{0, 0, 0}});
  CHECK(enumerate_configs(2, 2) == std::vector<CountVector>{{1, 0}, {0, 1}});
}

TEST_CASE("enumeration size matches num_configs") {
  for (std::int64_t p = 1; p <= 10; ++p)
    for (std::int64_t a = 1; a <= 5; ++a)
      CHECK(static_cast<std::int64_t>(enumerate_configs(p, a).size()) == num_configs(p, a));
}

TEST_CASE("config rank and unrank") {
  CHECK(config_rank(CountVector{1, 1, 0}) == 1);
  CHECK(config_unrank(0, 6, 4) == CountVector{5, 0, 0, 0});

  // Exhaustive round-trip for P=4, A=3.
  for (std::int64_t k = 0; k < num_configs(4, 3); ++k) {
    CHECK(config_rank(config_unrank(k, 4, 3)) == k);
  }
  CHECK_THROWS_AS(config_unrank(num_configs(4, 3), 4, 3), RangeError);
  CHECK_THROWS_AS(config_unrank(-1, 4, 3), RangeError);
}

TEST_CASE("rank is the enumeration position") {
  for (std::int64_t p = 1; p <= 8; ++p) {
    for (std::int64_t a = 1; a <= 4; ++a) {
      std::int64_t i = 0;
      for_each_config(p, a, [&](const CountVector& c) {
        CHECK(config_rank(c) == i);
        CHECK(config_unrank(i, p, a) == c);
        ++i;
      });
    }
  }
}

TEST_CASE("profile rank round-trip") {
  for (std::int64_t k = 0; k < num_profiles(5, 3); ++k) {
    CHECK(profile_rank(profile_unrank(k, 5, 3)) == k);
  }
}

TEST_CASE("multinomial theorem: configuration probabilities sum to one") {
  const std::vector<std::vector<double>> bases = {
      {0.1, 0.5, 0.4, 0.3}, {0.25, 0.25, 0.25, 0.25}, {0.7, 0.1, 0.1, 0.1}, {0.05, 0.05, 1.0, 0.9}};
  for (std::int64_t p = 2; p <= 8; ++p) {
    for (std::int64_t a = 2; a <= 4; ++a) {
      for (const auto& base : bases) {
        std::vector<double> mix(base.begin(), base.begin() + a);
        double norm = 0.0;
        for (double x : mix) norm += x;
        for (double& x : mix) x /= norm;
        double total = 0.0;
        for_each_config(p, a, [&](const CountVector& c) {
          double term = static_cast<double>(multinomial(c));
          for (std::int64_t s = 0; s < a; ++s)
            term *= std::pow(mix[static_cast<std::size_t>(s)], static_cast<double>(c[static_cast<std::size_t>(s)]));
          total += term;
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("balanced_counts maximizes the multinomial") {
  CHECK(balanced_counts(7, 3) == CountVector{3, 2, 2});
  // Spot-check maximality by enumeration.
  const CountVector best = balanced_counts(6, 3);
  const std::int64_t best_val = multinomial(best);
  for_each_count_vector(6, 3, [&](const CountVector& c) { CHECK(multinomial(c) <= best_val); });
}

TEST_CASE("max_players_without_overflow reproduces published limits") {
  CHECK(max_players_without_overflow(2) == 67);
  CHECK(max_players_without_overflow(5) == 32);
  CHECK(max_players_without_overflow(19) == 21);
  CHECK(max_players_without_overflow(25) == 21);
}

TEST_CASE("limit is tight: balanced multinomial fits at max and overflows past it") {
  for (std::int64_t a = 2; a <= 19; ++a) {
    const std::int64_t max_players = max_players_without_overflow(a);
    CHECK_NOTHROW(multinomial(balanced_counts(max_players - 1, a)));
    CHECK_THROWS_AS(multinomial(balanced_counts(max_players, a)), OverflowError);
  }
}
