#ifndef SYMGAMES_COMBINATORICS_HPP
#define SYMGAMES_COMBINATORICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace symgames::combinatorics {

// Integer count vector over actions. A profile sums to P, an opponent
// configuration to P-1.
using CountVector = std::vector<std::int64_t>;

// C(n, k) with exact overflow detection: throws OverflowError iff the true
// value exceeds 2^63-1. Intermediate products use 128-bit arithmetic so no
// representable result is rejected.
std::int64_t binomial(std::int64_t n, std::int64_t k);

// (sum counts)! / prod(counts!) as a product of binomials over prefix sums,
// multiplied with interleaved division. Throws OverflowError exactly when
// the result does not fit in a signed 64-bit integer.
std::int64_t multinomial(std::span<const std::int64_t> counts);
std::int64_t multinomial(const CountVector& counts);

// Natural log of the multinomial via lgamma; finite for any counts.
double log_multinomial(std::span<const std::int64_t> counts);
double log_multinomial(const CountVector& counts);

// Number of profiles C(P+A-1, P) and opponent configurations C(P+A-2, P-1).
std::int64_t num_profiles(std::int64_t players, std::int64_t actions);
std::int64_t num_configs(std::int64_t players, std::int64_t actions);

// Canonical order over count vectors of a fixed sum: the order induced by
// lexicographically sorted non-decreasing multisets of action indices
// (combinations with replacement). For sum 2 over 3 actions:
// (2,0,0),(1,1,0),(1,0,1),(0,2,0),(0,1,1),(0,0,2).
void for_each_count_vector(std::int64_t total, std::int64_t length,
                           const std::function<void(const CountVector&)>& fn);

// All opponent configurations (sum P-1) in canonical order.
std::vector<CountVector> enumerate_configs(std::int64_t players, std::int64_t actions);
void for_each_config(std::int64_t players, std::int64_t actions,
                     const std::function<void(const CountVector&)>& fn);
void for_each_profile(std::int64_t players, std::int64_t actions,
                      const std::function<void(const CountVector&)>& fn);

// Rank / unrank within the canonical order, mutually inverse. config_* treat
// the vector as an opponent configuration (sum P-1), profile_* as a full
// profile (sum P). Throws RangeError on an out-of-range index.
std::int64_t rank_counts(std::span<const std::int64_t> counts);
CountVector unrank_counts(std::int64_t index, std::int64_t total, std::int64_t length);

std::int64_t config_rank(std::span<const std::int64_t> config);
CountVector config_unrank(std::int64_t index, std::int64_t players, std::int64_t actions);
std::int64_t profile_rank(std::span<const std::int64_t> profile);
CountVector profile_unrank(std::int64_t index, std::int64_t players, std::int64_t actions);

// Counts as equal as possible: `total % length` entries of ceil, rest floor.
// This maximizes the multinomial over all count vectors of the given sum.
CountVector balanced_counts(std::int64_t total, std::int64_t length);

// Largest P such that no configuration over P-1 opponents has a repetition
// count exceeding 2^63-1. Only the most-balanced configuration is evaluated.
std::int64_t max_players_without_overflow(std::int64_t actions);

}  // namespace symgames::combinatorics

#endif  // SYMGAMES_COMBINATORICS_HPP
