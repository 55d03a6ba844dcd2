#ifndef SYMGAMES_REPRESENTATIONS_HPP
#define SYMGAMES_REPRESENTATIONS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "symgames/game_spec.hpp"
#include "symgames/normalization.hpp"

namespace symgames {

// The data-structure ladder. Every variant answers the same deviation-payoff
// queries; log_weighted is the canonical representation used by the solvers,
// the others exist for cross-validation and benchmarking.
enum class Variant {
  dict,
  profile_arrays,
  reps_arrays,
  opp_config,
  weighted,
  log_weighted,
};

inline constexpr Variant kAllVariants[] = {
    Variant::dict,         Variant::profile_arrays, Variant::reps_arrays,
    Variant::opp_config,   Variant::weighted,       Variant::log_weighted,
};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

class SymmetricGame {
 public:
  virtual ~SymmetricGame() = default;

  std::int64_t players() const { return players_; }
  std::int64_t actions() const { return actions_; }
  virtual Variant variant() const = 0;
  // Columns in the backing tables: num_profiles for profile-keyed variants,
  // num_configs for configuration-keyed ones.
  virtual std::int64_t num_columns() const = 0;

  // Expected payoff of deviating to each action against opponents drawn
  // i.i.d. from `mixture`. Native scale: raw payoffs for every variant
  // except log_weighted, which returns normalized values.
  virtual Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const = 0;

  // Column m is deviation_payoffs(mixtures.col(m)), evaluated by the exact
  // same per-mixture kernel. `parallel` partitions columns across threads
  // with results identical to the sequential loop.
  Eigen::MatrixXd deviation_payoffs_batch(const Eigen::Ref<const Eigen::MatrixXd>& mixtures,
                                          bool parallel = false) const;

  // Jacobian entry (a, s) = d u_a / d sigma_s on the native scale. Only the
  // log-weighted variant implements this; others throw UnsupportedOperation.
  virtual Eigen::MatrixXd deviation_derivatives(const Eigen::Ref<const Eigen::VectorXd>& mixture) const;

  // Raw-scale payoff of `action` in a full profile that plays it.
  virtual double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const = 0;

  // The stored payoff table, one row per action, one column per profile or
  // configuration: raw payoffs for dict / profile-arrays / reps-arrays /
  // opp-config, repetition-weighted payoffs for weighted, and
  // lambda = log(reps) + log(normalized payoff) for log-weighted. Masked
  // entries are NaN for dict and zero for the profile-keyed arrays.
  virtual Eigen::ArrayXXd payoff_table() const = 0;

  bool normalized_scale() const { return variant() == Variant::log_weighted; }
  const NormalizationParams& normalization() const { return params_; }
  double raw_min() const { return raw_min_; }
  double raw_max() const { return raw_max_; }
  double payoff_range() const { return raw_max_ - raw_min_; }

  // Native-scale values -> raw scale (identity for raw-native variants).
  Eigen::VectorXd denormalize(const Eigen::Ref<const Eigen::VectorXd>& values) const;
  double denormalize(double value) const;
  // Native-scale Jacobian -> raw scale. The affine payoff shift contributes
  // a constant (P-1) * (kMinPayoff - scale * offset) to every entry before
  // rescaling, because the normalized game differs off the simplex.
  Eigen::MatrixXd denormalize_derivatives(const Eigen::Ref<const Eigen::MatrixXd>& jacobian) const;

 protected:
  SymmetricGame(std::int64_t players, std::int64_t actions, double raw_min, double raw_max)
      : players_(players),
        actions_(actions),
        raw_min_(raw_min),
        raw_max_(raw_max),
        params_(NormalizationParams::from_range(raw_min, raw_max)) {}

  void check_mixture_size(const Eigen::Ref<const Eigen::VectorXd>& mixture) const;

  std::int64_t players_;
  std::int64_t actions_;
  double raw_min_;
  double raw_max_;
  NormalizationParams params_;
};

// Builds the requested representation from a payoff generator. Non-log
// variants require P within max_players_without_overflow(A) and throw
// OverflowError otherwise; every variant rejects non-finite payoffs.
std::unique_ptr<SymmetricGame> build(const GameSpec& spec, Variant variant);

// Log-weighted game with 32-bit table storage and arithmetic, for the
// precision experiment. Deviation payoffs are computed in float and widened
// on return.
std::unique_ptr<SymmetricGame> build_log_weighted_f32(const GameSpec& spec);

// u(sigma) = u_vec(sigma) . sigma and reg(sigma) = max_a u_a - u, on the
// game's native scale (raw = true denormalizes the deviation payoffs first).
double expected_utility(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture,
                        bool raw = false);
double regret(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture,
              bool raw = false);

// Support-restricted view: configurations range over the support only, but
// payoff rows cover all actions, so deviation payoffs against a support
// mixture are available for the full action set. Values are normalized;
// denormalize() maps them back to the raw scale.
class RestrictedGame {
 public:
  RestrictedGame(const GameSpec& spec, std::vector<std::int64_t> support);

  std::int64_t players() const { return players_; }
  std::int64_t actions() const { return actions_; }
  const std::vector<std::int64_t>& support() const { return support_; }

  // `support_mixture` has one entry per support action; the result has one
  // entry per action of the full game.
  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& support_mixture) const;
  Eigen::VectorXd denormalize(const Eigen::Ref<const Eigen::VectorXd>& values) const;
  // Full-length mixture with the support entries placed and zeros elsewhere.
  Eigen::VectorXd embed(const Eigen::Ref<const Eigen::VectorXd>& support_mixture) const;

  const NormalizationParams& normalization() const { return params_; }

 private:
  std::int64_t players_;
  std::int64_t actions_;
  std::vector<std::int64_t> support_;
  Eigen::ArrayXXd config_;  // |support| x C(P+|S|-2, P-1)
  Eigen::ArrayXXd lambda_;  // A x C(P+|S|-2, P-1)
  NormalizationParams params_;
};

RestrictedGame restrict_support(const GameSpec& spec, std::vector<std::int64_t> support);

// Independent test oracle: averages payoffs over all A^(P-1) ordered
// opponent assignments. Shares nothing with the table-based kernels.
// Requires A^(P-1) <= 10^7.
Eigen::VectorXd brute_force_deviation_payoffs(const GameSpec& spec,
                                              const Eigen::Ref<const Eigen::VectorXd>& mixture);

}  // namespace symgames

#endif  // SYMGAMES_REPRESENTATIONS_HPP
