#include "symgames/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "symgames/errors.hpp"

namespace symgames::combinatorics {

namespace {

constexpr std::int64_t kMax64 = std::numeric_limits<std::int64_t>::max();

// C(n, k) into `out`; false on overflow of the result. Intermediates are
// exact: after step i the accumulator equals C(n-k+i, i) <= C(n, k), so a
// single 128-bit product per step suffices.
bool try_binomial(std::int64_t n, std::int64_t k, std::int64_t& out) {
  if (k < 0 || k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    unsigned __int128 p = static_cast<unsigned __int128>(r) * static_cast<unsigned __int128>(n - k + i);
    unsigned __int128 q = p / static_cast<unsigned __int128>(i);
    if (q > static_cast<unsigned __int128>(kMax64)) return false;
    r = static_cast<std::int64_t>(q);
  }
  out = r;
  return true;
}

bool try_multinomial(std::span<const std::int64_t> counts, std::int64_t& out) {
  std::int64_t prefix = 0;
  std::int64_t m = 1;
  for (std::int64_t c : counts) {
    if (c < 0) throw InvalidArgument("multinomial: negative count");
    prefix += c;
    std::int64_t b = 0;
    if (!try_binomial(prefix, c, b)) return false;
    unsigned __int128 p = static_cast<unsigned __int128>(m) * static_cast<unsigned __int128>(b);
    if (p > static_cast<unsigned __int128>(kMax64)) return false;
    m = static_cast<std::int64_t>(p);
  }
  out = m;
  return true;
}

}  // namespace

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw InvalidArgument("binomial: negative n");
  std::int64_t r = 0;
  if (!try_binomial(n, k, r)) throw OverflowError("binomial exceeds 64-bit signed range");
  return r;
}

std::int64_t multinomial(std::span<const std::int64_t> counts) {
  std::int64_t r = 0;
  if (!try_multinomial(counts, r)) throw OverflowError("multinomial exceeds 64-bit signed range");
  return r;
}

std::int64_t multinomial(const CountVector& counts) {
  return multinomial(std::span<const std::int64_t>(counts));
}

double log_multinomial(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  double acc = 0.0;
  for (std::int64_t c : counts) {
    if (c < 0) throw InvalidArgument("log_multinomial: negative count");
    total += c;
    acc -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  return acc + std::lgamma(static_cast<double>(total) + 1.0);
}

double log_multinomial(const CountVector& counts) {
  return log_multinomial(std::span<const std::int64_t>(counts));
}

std::int64_t num_profiles(std::int64_t players, std::int64_t actions) {
  if (players < 1 || actions < 1) throw InvalidArgument("num_profiles: players and actions must be >= 1");
  return binomial(players + actions - 1, players);
}

std::int64_t num_configs(std::int64_t players, std::int64_t actions) {
  if (players < 1 || actions < 1) throw InvalidArgument("num_configs: players and actions must be >= 1");
  return binomial(players + actions - 2, players - 1);
}

void for_each_count_vector(std::int64_t total, std::int64_t length,
                           const std::function<void(const CountVector&)>& fn) {
  if (length < 1 || total < 0) throw InvalidArgument("for_each_count_vector: bad arguments");
  CountVector c(static_cast<std::size_t>(length), 0);
  c[0] = total;
  for (;;) {
    fn(c);
    // Successor in canonical order: move one unit from the rightmost
    // non-final slot with a positive count, collecting everything to its
    // right into the next slot.
    std::int64_t i = length - 2;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == 0) --i;
    if (i < 0) return;
    std::int64_t tail = 0;
    for (std::int64_t k = i + 1; k < length; ++k) {
      tail += c[static_cast<std::size_t>(k)];
      c[static_cast<std::size_t>(k)] = 0;
    }
    c[static_cast<std::size_t>(i)] -= 1;
    c[static_cast<std::size_t>(i + 1)] = tail + 1;
  }
}

void for_each_config(std::int64_t players, std::int64_t actions,
                     const std::function<void(const CountVector&)>& fn) {
  if (players < 1 || actions < 1) throw InvalidArgument("for_each_config: bad arguments");
  for_each_count_vector(players - 1, actions, fn);
}

void for_each_profile(std::int64_t players, std::int64_t actions,
                      const std::function<void(const CountVector&)>& fn) {
  if (players < 1 || actions < 1) throw InvalidArgument("for_each_profile: bad arguments");
  for_each_count_vector(players, actions, fn);
}

std::vector<CountVector> enumerate_configs(std::int64_t players, std::int64_t actions) {
  std::vector<CountVector> out;
  out.reserve(static_cast<std::size_t>(num_configs(players, actions)));
  for_each_config(players, actions, [&](const CountVector& c) { out.push_back(c); });
  return out;
}

std::int64_t rank_counts(std::span<const std::int64_t> counts) {
  const std::int64_t length = static_cast<std::int64_t>(counts.size());
  if (length < 1) throw InvalidArgument("rank_counts: empty vector");
  std::int64_t remaining = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw RangeError("rank_counts: negative count");
    remaining += c;
  }
  std::int64_t rank = 0;
  for (std::int64_t i = 0; i + 1 < length; ++i) {
    const std::int64_t ci = counts[static_cast<std::size_t>(i)];
    // Blocks with a larger count in slot i come first; a block with count k
    // holds every vector of sum remaining-k over the slots to the right.
    for (std::int64_t k = remaining; k > ci; --k) {
      rank += binomial(remaining - k + length - i - 2, remaining - k);
    }
    remaining -= ci;
  }
  return rank;
}

CountVector unrank_counts(std::int64_t index, std::int64_t total, std::int64_t length) {
  if (length < 1 || total < 0) throw InvalidArgument("unrank_counts: bad arguments");
  CountVector c(static_cast<std::size_t>(length), 0);
  std::int64_t remaining = total;
  for (std::int64_t i = 0; i + 1 < length; ++i) {
    bool placed = false;
    for (std::int64_t k = remaining; k >= 0; --k) {
      std::int64_t block = binomial(remaining - k + length - i - 2, remaining - k);
      if (index < block) {
        c[static_cast<std::size_t>(i)] = k;
        remaining -= k;
        placed = true;
        break;
      }
      index -= block;
    }
    if (!placed) throw RangeError("unrank_counts: index out of range");
  }
  c[static_cast<std::size_t>(length - 1)] = remaining;
  return c;
}

std::int64_t config_rank(std::span<const std::int64_t> config) { return rank_counts(config); }

CountVector config_unrank(std::int64_t index, std::int64_t players, std::int64_t actions) {
  if (players < 1) throw InvalidArgument("config_unrank: players must be >= 1");
  if (index < 0 || index >= num_configs(players, actions)) throw RangeError("config_unrank: index out of range");
  return unrank_counts(index, players - 1, actions);
}

std::int64_t profile_rank(std::span<const std::int64_t> profile) { return rank_counts(profile); }

CountVector profile_unrank(std::int64_t index, std::int64_t players, std::int64_t actions) {
  if (players < 1) throw InvalidArgument("profile_unrank: players must be >= 1");
  if (index < 0 || index >= num_profiles(players, actions)) throw RangeError("profile_unrank: index out of range");
  return unrank_counts(index, players, actions);
}

CountVector balanced_counts(std::int64_t total, std::int64_t length) {
  if (length < 1 || total < 0) throw InvalidArgument("balanced_counts: bad arguments");
  CountVector c(static_cast<std::size_t>(length), total / length);
  for (std::int64_t i = 0; i < total % length; ++i) c[static_cast<std::size_t>(i)] += 1;
  return c;
}

std::int64_t max_players_without_overflow(std::int64_t actions) {
  if (actions < 2) throw InvalidArgument("max_players_without_overflow: actions must be >= 2");
  const auto fits = [&](std::int64_t players) {
    std::int64_t r = 0;
    return try_multinomial(balanced_counts(players - 1, actions), r);
  };
  std::int64_t players = 2;
  while (fits(players + 1)) ++players;
  return players;
}

}  // namespace symgames::combinatorics
