#include "symgames/representations.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>
#include <unordered_map>

#include "symgames/errors.hpp"

namespace symgames {

using combinatorics::CountVector;

namespace {

// Raw configuration-keyed tables shared by every variant constructor. The
// payoff generator runs exactly once per configuration.
struct RawTables {
  Eigen::ArrayXXd config;   // A x NC, canonical order
  Eigen::ArrayXXd payoffs;  // A x NC
  double raw_min = std::numeric_limits<double>::infinity();
  double raw_max = -std::numeric_limits<double>::infinity();
};

RawTables evaluate_spec(const GameSpec& spec) {
  if (spec.players < 2 || spec.actions < 2)
    throw InvalidArgument("game spec requires at least 2 players and 2 actions");
  if (!spec.payoffs) throw InvalidArgument("game spec has no payoff generator");

  const std::int64_t nc = combinatorics::num_configs(spec.players, spec.actions);
  RawTables raw;
  raw.config.resize(spec.actions, nc);
  raw.payoffs.resize(spec.actions, nc);

  std::int64_t j = 0;
  combinatorics::for_each_config(spec.players, spec.actions, [&](const CountVector& c) {
    const Eigen::VectorXd v = spec.payoffs(c);
    if (v.size() != spec.actions)
      throw DimensionMismatch("payoff generator returned a vector of the wrong length");
    for (std::int64_t a = 0; a < spec.actions; ++a) {
      const double x = v(a);
      if (!std::isfinite(x)) throw NonFinitePayoff("payoff generator produced a non-finite value");
      raw.config(a, j) = static_cast<double>(c[static_cast<std::size_t>(a)]);
      raw.payoffs(a, j) = x;
      raw.raw_min = std::min(raw.raw_min, x);
      raw.raw_max = std::max(raw.raw_max, x);
    }
    ++j;
  });
  return raw;
}

void validate_profile(std::span<const std::int64_t> profile, std::int64_t players,
                      std::int64_t actions, std::int64_t action) {
  if (static_cast<std::int64_t>(profile.size()) != actions)
    throw DimensionMismatch("profile length does not match the action count");
  if (action < 0 || action >= actions) throw RangeError("action index out of range");
  std::int64_t total = 0;
  for (std::int64_t c : profile) {
    if (c < 0) throw InvalidArgument("profile has a negative count");
    total += c;
  }
  if (total != players) throw InvalidArgument("profile does not sum to the player count");
  if (profile[static_cast<std::size_t>(action)] == 0)
    throw ActionNotPlayed("queried action has zero count in the profile");
}

CountVector opponent_config(std::span<const std::int64_t> profile, std::int64_t action) {
  CountVector c(profile.begin(), profile.end());
  c[static_cast<std::size_t>(action)] -= 1;
  return c;
}

struct VectorHash {
  std::size_t operator()(const CountVector& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t x : v) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Baseline: hash table from profiles to payoff vectors. Repetitions and
// probabilities are recomputed from scratch on every query, one pass over
// the mapping per action.
class DictGame final : public SymmetricGame {
 public:
  DictGame(const GameSpec& spec, const RawTables& raw)
      : SymmetricGame(spec.players, spec.actions, raw.raw_min, raw.raw_max) {
    table_.reserve(static_cast<std::size_t>(combinatorics::num_profiles(players_, actions_)));
    combinatorics::for_each_profile(players_, actions_, [&](const CountVector& s) {
      std::vector<double> pay(static_cast<std::size_t>(actions_),
                              std::numeric_limits<double>::quiet_NaN());
      for (std::int64_t a = 0; a < actions_; ++a) {
        if (s[static_cast<std::size_t>(a)] == 0) continue;
        CountVector c = s;
        c[static_cast<std::size_t>(a)] -= 1;
        pay[static_cast<std::size_t>(a)] = raw.payoffs(a, combinatorics::config_rank(c));
      }
      profiles_.push_back(s);
      table_.emplace(s, std::move(pay));
    });
  }

  Variant variant() const override { return Variant::dict; }
  std::int64_t num_columns() const override { return static_cast<std::int64_t>(profiles_.size()); }

  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(actions_);
    CountVector scratch(static_cast<std::size_t>(actions_));
    for (std::int64_t a = 0; a < actions_; ++a) {
      double total = 0.0;
      for (const auto& [s, pay] : table_) {
        if (s[static_cast<std::size_t>(a)] == 0) continue;
        scratch = s;
        scratch[static_cast<std::size_t>(a)] -= 1;
        double p = static_cast<double>(combinatorics::multinomial(scratch));
        for (std::int64_t b = 0; b < actions_; ++b)
          p *= std::pow(mixture(b), static_cast<double>(scratch[static_cast<std::size_t>(b)]));
        total += p * pay[static_cast<std::size_t>(a)];
      }
      u(a) = total;
    }
    return u;
  }

  double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const override {
    validate_profile(profile, players_, actions_, action);
    const auto it = table_.find(CountVector(profile.begin(), profile.end()));
    if (it == table_.end()) throw RangeError("profile not found");
    return it->second[static_cast<std::size_t>(action)];
  }

  Eigen::ArrayXXd payoff_table() const override {
    Eigen::ArrayXXd out(actions_, static_cast<std::int64_t>(profiles_.size()));
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const auto& pay = table_.at(profiles_[i]);
      for (std::int64_t a = 0; a < actions_; ++a)
        out(a, static_cast<std::int64_t>(i)) = pay[static_cast<std::size_t>(a)];
    }
    return out;
  }

 private:
  std::unordered_map<CountVector, std::vector<double>, VectorHash> table_;
  std::vector<CountVector> profiles_;  // canonical order
};

// ---------------------------------------------------------------------------
// Parallel profile and payoff arrays, one column per profile. Masked payoff
// entries are zero-filled; the mask is the zero count in the profile column.
// Repetitions are still recomputed per query.
class ProfileGame final : public SymmetricGame {
 public:
  ProfileGame(const GameSpec& spec, const RawTables& raw)
      : SymmetricGame(spec.players, spec.actions, raw.raw_min, raw.raw_max) {
    const std::int64_t np = combinatorics::num_profiles(players_, actions_);
    counts_.resize(static_cast<std::size_t>(np * actions_));
    payoffs_ = Eigen::ArrayXXd::Zero(actions_, np);
    std::int64_t i = 0;
    combinatorics::for_each_profile(players_, actions_, [&](const CountVector& s) {
      for (std::int64_t a = 0; a < actions_; ++a) {
        counts_[static_cast<std::size_t>(i * actions_ + a)] = s[static_cast<std::size_t>(a)];
        if (s[static_cast<std::size_t>(a)] == 0) continue;
        CountVector c = s;
        c[static_cast<std::size_t>(a)] -= 1;
        payoffs_(a, i) = raw.payoffs(a, combinatorics::config_rank(c));
      }
      ++i;
    });
    num_profiles_ = np;
  }

  Variant variant() const override { return Variant::profile_arrays; }
  std::int64_t num_columns() const override { return num_profiles_; }

  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(actions_);
    CountVector scratch(static_cast<std::size_t>(actions_));
    for (std::int64_t a = 0; a < actions_; ++a) {
      double total = 0.0;
      for (std::int64_t i = 0; i < num_profiles_; ++i) {
        const std::int64_t* col = &counts_[static_cast<std::size_t>(i * actions_)];
        if (col[a] == 0) continue;
        for (std::int64_t b = 0; b < actions_; ++b) scratch[static_cast<std::size_t>(b)] = col[b];
        scratch[static_cast<std::size_t>(a)] -= 1;
        double p = static_cast<double>(combinatorics::multinomial(scratch));
        for (std::int64_t b = 0; b < actions_; ++b)
          p *= std::pow(mixture(b), static_cast<double>(scratch[static_cast<std::size_t>(b)]));
        total += p * payoffs_(a, i);
      }
      u(a) = total;
    }
    return u;
  }

  double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const override {
    validate_profile(profile, players_, actions_, action);
    return payoffs_(action, combinatorics::profile_rank(profile));
  }

  Eigen::ArrayXXd payoff_table() const override { return payoffs_; }

 private:
  std::int64_t num_profiles_ = 0;
  std::vector<std::int64_t> counts_;  // column-major A per profile
  Eigen::ArrayXXd payoffs_;
};

// ---------------------------------------------------------------------------
// Profile arrays plus a pre-computed repetitions table, enabling the
// single-pass full-vector computation: raise the mixture to the full profile
// counts, then divide the repetitions row for each action by that action's
// probability (floored at machine epsilon) to recover the exponent P-1.
class RepsGame final : public SymmetricGame {
 public:
  RepsGame(const GameSpec& spec, const RawTables& raw)
      : SymmetricGame(spec.players, spec.actions, raw.raw_min, raw.raw_max) {
    const std::int64_t np = combinatorics::num_profiles(players_, actions_);
    counts_.resize(static_cast<std::size_t>(np * actions_));
    payoffs_ = Eigen::ArrayXXd::Zero(actions_, np);
    reps_ = Eigen::ArrayXXd::Zero(actions_, np);
    std::int64_t i = 0;
    combinatorics::for_each_profile(players_, actions_, [&](const CountVector& s) {
      for (std::int64_t a = 0; a < actions_; ++a) {
        counts_[static_cast<std::size_t>(i * actions_ + a)] = s[static_cast<std::size_t>(a)];
        if (s[static_cast<std::size_t>(a)] == 0) continue;
        CountVector c = s;
        c[static_cast<std::size_t>(a)] -= 1;
        payoffs_(a, i) = raw.payoffs(a, combinatorics::config_rank(c));
        reps_(a, i) = static_cast<double>(combinatorics::multinomial(c));
      }
      ++i;
    });
    num_profiles_ = np;
  }

  Variant variant() const override { return Variant::reps_arrays; }
  std::int64_t num_columns() const override { return num_profiles_; }

  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    Eigen::VectorXd floored = mixture.cwiseMax(std::numeric_limits<double>::epsilon());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(actions_);
    for (std::int64_t i = 0; i < num_profiles_; ++i) {
      const std::int64_t* col = &counts_[static_cast<std::size_t>(i * actions_)];
      double prob = 1.0;
      for (std::int64_t b = 0; b < actions_; ++b)
        prob *= std::pow(floored(b), static_cast<double>(col[b]));
      for (std::int64_t a = 0; a < actions_; ++a)
        u(a) += payoffs_(a, i) * reps_(a, i) * prob / floored(a);
    }
    return u;
  }

  double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const override {
    validate_profile(profile, players_, actions_, action);
    return payoffs_(action, combinatorics::profile_rank(profile));
  }

  Eigen::ArrayXXd payoff_table() const override { return payoffs_; }

 private:
  std::int64_t num_profiles_ = 0;
  std::vector<std::int64_t> counts_;
  Eigen::ArrayXXd payoffs_;
  Eigen::ArrayXXd reps_;
};

// ---------------------------------------------------------------------------
// Opponent-configuration tables: one column per configuration over P-1
// opponents, a single repeats row, and no masking anywhere.
class ConfigGame final : public SymmetricGame {
 public:
  ConfigGame(const GameSpec& spec, const RawTables& raw, bool pre_weighted)
      : SymmetricGame(spec.players, spec.actions, raw.raw_min, raw.raw_max),
        pre_weighted_(pre_weighted),
        config_(raw.config),
        payoffs_(raw.payoffs) {
    const std::int64_t nc = config_.cols();
    repeats_.resize(nc);
    std::int64_t j = 0;
    combinatorics::for_each_config(players_, actions_, [&](const CountVector& c) {
      repeats_(j) = static_cast<double>(combinatorics::multinomial(c));
      ++j;
    });
    if (pre_weighted_) {
      payoffs_ = payoffs_.rowwise() * repeats_.transpose();
      repeats_.resize(0);
    }
  }

  Variant variant() const override {
    return pre_weighted_ ? Variant::weighted : Variant::opp_config;
  }
  std::int64_t num_columns() const override { return config_.cols(); }

  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    const std::int64_t nc = config_.cols();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(actions_);
    for (std::int64_t j = 0; j < nc; ++j) {
      double p = pre_weighted_ ? 1.0 : repeats_(j);
      for (std::int64_t a = 0; a < actions_; ++a) p *= std::pow(mixture(a), config_(a, j));
      for (std::int64_t a = 0; a < actions_; ++a) u(a) += payoffs_(a, j) * p;
    }
    return u;
  }

  double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const override {
    validate_profile(profile, players_, actions_, action);
    const CountVector c = opponent_config(profile, action);
    const std::int64_t j = combinatorics::config_rank(c);
    if (!pre_weighted_) return payoffs_(action, j);
    return payoffs_(action, j) / static_cast<double>(combinatorics::multinomial(c));
  }

  Eigen::ArrayXXd payoff_table() const override { return payoffs_; }

 private:
  bool pre_weighted_;
  Eigen::ArrayXXd config_;
  Eigen::ArrayXXd payoffs_;
  Eigen::ArrayXd repeats_;
};

// ---------------------------------------------------------------------------
// Canonical representation: configurations plus a table of
// lambda = log(reps) + log(normalized payoff). Queries run entirely in
// log space with mixture probabilities floored at machine epsilon, and
// return normalized-scale values. Scalar selects the table precision.
template <typename Scalar>
class LogGame final : public SymmetricGame {
  using ArrayXXs = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using ArrayXs = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

 public:
  LogGame(const GameSpec& spec, const RawTables& raw)
      : SymmetricGame(spec.players, spec.actions, raw.raw_min, raw.raw_max) {
    config_ = raw.config.cast<Scalar>();
    lambda_.resize(actions_, raw.payoffs.cols());
    std::int64_t j = 0;
    combinatorics::for_each_config(players_, actions_, [&](const CountVector& c) {
      const double log_reps = combinatorics::log_multinomial(c);
      for (std::int64_t a = 0; a < actions_; ++a)
        lambda_(a, j) = static_cast<Scalar>(std::log(params_.normalize(raw.payoffs(a, j))) + log_reps);
      ++j;
    });
  }

  Variant variant() const override { return Variant::log_weighted; }
  std::int64_t num_columns() const override { return config_.cols(); }

  Eigen::VectorXd deviation_payoffs(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    const ArrayXs logm = floored(mixture).log();
    const ArrayXs log_probs = (config_.matrix().transpose() * logm.matrix()).array();
    const ArrayXs u = (lambda_.rowwise() + log_probs.transpose()).exp().rowwise().sum();
    return u.template cast<double>().matrix();
  }

  Eigen::MatrixXd deviation_derivatives(const Eigen::Ref<const Eigen::VectorXd>& mixture) const override {
    check_mixture_size(mixture);
    const ArrayXs mf = floored(mixture);
    const ArrayXs logm = mf.log();
    const ArrayXs log_probs = (config_.matrix().transpose() * logm.matrix()).array();
    const ArrayXXs gamma = (lambda_.rowwise() + log_probs.transpose()).exp();
    // J(a, s) = sum_j gamma(a, j) * config(s, j) / mixture(s)
    ArrayXXs jac = (gamma.matrix() * config_.matrix().transpose()).array();
    jac.rowwise() /= mf.transpose();
    return jac.template cast<double>().matrix();
  }

  double pure_payoff(std::span<const std::int64_t> profile, std::int64_t action) const override {
    validate_profile(profile, players_, actions_, action);
    const CountVector c = opponent_config(profile, action);
    const double lam = static_cast<double>(lambda_(action, combinatorics::config_rank(c)));
    return params_.denormalize(std::exp(lam - combinatorics::log_multinomial(c)));
  }

  Eigen::ArrayXXd payoff_table() const override { return lambda_.template cast<double>(); }

 private:
  ArrayXs floored(const Eigen::Ref<const Eigen::VectorXd>& mixture) const {
    return mixture.cast<Scalar>().array().max(std::numeric_limits<Scalar>::epsilon());
  }

  ArrayXXs config_;
  ArrayXXs lambda_;
};

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::dict: return "dict";
    case Variant::profile_arrays: return "profile-arrays";
    case Variant::reps_arrays: return "reps-arrays";
    case Variant::opp_config: return "opp-config";
    case Variant::weighted: return "weighted";
    case Variant::log_weighted: return "log-weighted";
  }
  return "unknown";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants)
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

void validate_mixture(const Eigen::Ref<const Eigen::VectorXd>& mixture, std::int64_t actions,
                      double tol) {
  if (mixture.size() != actions) throw DimensionMismatch("mixture length does not match action count");
  double total = 0.0;
  for (Eigen::Index i = 0; i < mixture.size(); ++i) {
    if (!(mixture(i) >= -tol)) throw InvalidArgument("mixture has a negative entry");
    total += mixture(i);
  }
  if (std::abs(total - 1.0) > std::max(tol, 1e-9))
    throw InvalidArgument("mixture probabilities do not sum to 1");
}

void SymmetricGame::check_mixture_size(const Eigen::Ref<const Eigen::VectorXd>& mixture) const {
  if (mixture.size() != actions_)
    throw DimensionMismatch("mixture length does not match action count");
}

Eigen::MatrixXd SymmetricGame::deviation_payoffs_batch(
    const Eigen::Ref<const Eigen::MatrixXd>& mixtures, bool parallel) const {
  if (mixtures.rows() != actions_)
    throw DimensionMismatch("mixture batch must have one row per action");
  const std::int64_t batch = mixtures.cols();
  Eigen::MatrixXd out(actions_, batch);
  const auto run = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t m = lo; m < hi; ++m) out.col(m) = deviation_payoffs(mixtures.col(m));
  };
  const unsigned hw = std::thread::hardware_concurrency();
  if (!parallel || batch < 2 || hw < 2) {
    run(0, batch);
    return out;
  }
  const std::int64_t n_threads = std::min<std::int64_t>(hw, batch);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  for (std::int64_t t = 0; t < n_threads; ++t) {
    const std::int64_t lo = batch * t / n_threads;
    const std::int64_t hi = batch * (t + 1) / n_threads;
    workers.emplace_back(run, lo, hi);
  }
  for (auto& w : workers) w.join();
  return out;
}

Eigen::MatrixXd SymmetricGame::deviation_derivatives(
    const Eigen::Ref<const Eigen::VectorXd>&) const {
  throw UnsupportedOperation("deviation derivatives are implemented for the log-weighted variant");
}

Eigen::VectorXd SymmetricGame::denormalize(const Eigen::Ref<const Eigen::VectorXd>& values) const {
  if (!normalized_scale()) return values;
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out(i) = params_.denormalize(values(i));
  return out;
}

double SymmetricGame::denormalize(double value) const {
  return normalized_scale() ? params_.denormalize(value) : value;
}

Eigen::MatrixXd SymmetricGame::denormalize_derivatives(
    const Eigen::Ref<const Eigen::MatrixXd>& jacobian) const {
  if (!normalized_scale()) return jacobian;
  const double shift = NormalizationParams::kMinPayoff - params_.scale * params_.offset;
  const double constant = shift * static_cast<double>(players_ - 1);
  return ((jacobian.array() - constant) / params_.scale).matrix();
}

std::unique_ptr<SymmetricGame> build(const GameSpec& spec, Variant variant) {
  if (spec.actions >= 2 && variant != Variant::log_weighted) {
    const std::int64_t limit = combinatorics::max_players_without_overflow(spec.actions);
    if (spec.players > limit)
      throw OverflowError("repetitions overflow a 64-bit integer at this size; use the log-weighted variant");
  }
  const RawTables raw = evaluate_spec(spec);
  switch (variant) {
    case Variant::dict: return std::make_unique<DictGame>(spec, raw);
    case Variant::profile_arrays: return std::make_unique<ProfileGame>(spec, raw);
    case Variant::reps_arrays: return std::make_unique<RepsGame>(spec, raw);
    case Variant::opp_config: return std::make_unique<ConfigGame>(spec, raw, false);
    case Variant::weighted: return std::make_unique<ConfigGame>(spec, raw, true);
    case Variant::log_weighted: return std::make_unique<LogGame<double>>(spec, raw);
  }
  throw InvalidArgument("unknown variant");
}

std::unique_ptr<SymmetricGame> build_log_weighted_f32(const GameSpec& spec) {
  const RawTables raw = evaluate_spec(spec);
  return std::make_unique<LogGame<float>>(spec, raw);
}

double expected_utility(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture,
                        bool raw) {
  Eigen::VectorXd u = game.deviation_payoffs(mixture);
  if (raw) u = game.denormalize(u);
  return u.dot(mixture);
}

double regret(const SymmetricGame& game, const Eigen::Ref<const Eigen::VectorXd>& mixture, bool raw) {
  Eigen::VectorXd u = game.deviation_payoffs(mixture);
  if (raw) u = game.denormalize(u);
  return u.maxCoeff() - u.dot(mixture);
}

RestrictedGame::RestrictedGame(const GameSpec& spec, std::vector<std::int64_t> support)
    : players_(spec.players), actions_(spec.actions), support_(std::move(support)) {
  if (support_.empty()) throw EmptySupport("support must contain at least one action");
  std::sort(support_.begin(), support_.end());
  if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw InvalidArgument("support contains a duplicate action");
  if (support_.front() < 0 || support_.back() >= actions_)
    throw RangeError("support action out of range");
  if (!spec.payoffs) throw InvalidArgument("game spec has no payoff generator");

  const std::int64_t m = static_cast<std::int64_t>(support_.size());
  const std::int64_t nc = combinatorics::num_configs(players_, m);
  config_.resize(m, nc);
  lambda_.resize(actions_, nc);
  Eigen::ArrayXXd raw(actions_, nc);
  double raw_min = std::numeric_limits<double>::infinity();
  double raw_max = -raw_min;

  std::int64_t j = 0;
  std::vector<double> log_reps(static_cast<std::size_t>(nc));
  combinatorics::for_each_count_vector(players_ - 1, m, [&](const CountVector& cs) {
    CountVector full(static_cast<std::size_t>(actions_), 0);
    for (std::int64_t r = 0; r < m; ++r)
      full[static_cast<std::size_t>(support_[static_cast<std::size_t>(r)])] =
          cs[static_cast<std::size_t>(r)];
    const Eigen::VectorXd v = spec.payoffs(full);
    if (v.size() != actions_)
      throw DimensionMismatch("payoff generator returned a vector of the wrong length");
    for (std::int64_t r = 0; r < m; ++r)
      config_(r, j) = static_cast<double>(cs[static_cast<std::size_t>(r)]);
    for (std::int64_t a = 0; a < actions_; ++a) {
      if (!std::isfinite(v(a))) throw NonFinitePayoff("payoff generator produced a non-finite value");
      raw(a, j) = v(a);
      raw_min = std::min(raw_min, v(a));
      raw_max = std::max(raw_max, v(a));
    }
    log_reps[static_cast<std::size_t>(j)] = combinatorics::log_multinomial(cs);
    ++j;
  });

  params_ = NormalizationParams::from_range(raw_min, raw_max);
  for (std::int64_t col = 0; col < nc; ++col)
    for (std::int64_t a = 0; a < actions_; ++a)
      lambda_(a, col) = std::log(params_.normalize(raw(a, col))) + log_reps[static_cast<std::size_t>(col)];
}

Eigen::VectorXd RestrictedGame::deviation_payoffs(
    const Eigen::Ref<const Eigen::VectorXd>& support_mixture) const {
  if (support_mixture.size() != static_cast<Eigen::Index>(support_.size()))
    throw DimensionMismatch("mixture length does not match the support size");
  const Eigen::ArrayXd logm =
      support_mixture.array().max(std::numeric_limits<double>::epsilon()).log();
  const Eigen::ArrayXd log_probs = (config_.matrix().transpose() * logm.matrix()).array();
  return (lambda_.rowwise() + log_probs.transpose()).exp().rowwise().sum().matrix();
}

Eigen::VectorXd RestrictedGame::denormalize(const Eigen::Ref<const Eigen::VectorXd>& values) const {
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out(i) = params_.denormalize(values(i));
  return out;
}

Eigen::VectorXd RestrictedGame::embed(const Eigen::Ref<const Eigen::VectorXd>& support_mixture) const {
  if (support_mixture.size() != static_cast<Eigen::Index>(support_.size()))
    throw DimensionMismatch("mixture length does not match the support size");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(actions_);
  for (std::size_t r = 0; r < support_.size(); ++r)
    full(support_[r]) = support_mixture(static_cast<Eigen::Index>(r));
  return full;
}

RestrictedGame restrict_support(const GameSpec& spec, std::vector<std::int64_t> support) {
  return RestrictedGame(spec, std::move(support));
}

Eigen::VectorXd brute_force_deviation_payoffs(const GameSpec& spec,
                                              const Eigen::Ref<const Eigen::VectorXd>& mixture) {
  if (spec.players < 2 || spec.actions < 2)
    throw InvalidArgument("game spec requires at least 2 players and 2 actions");
  if (mixture.size() != spec.actions)
    throw DimensionMismatch("mixture length does not match action count");
  const std::int64_t opponents = spec.players - 1;
  if (std::pow(static_cast<double>(spec.actions), static_cast<double>(opponents)) > 1e7)
    throw InvalidArgument("ordered enumeration too large");

  Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.actions);
  std::vector<std::int64_t> assignment(static_cast<std::size_t>(opponents), 0);
  CountVector counts(static_cast<std::size_t>(spec.actions), 0);
  for (;;) {
    std::fill(counts.begin(), counts.end(), 0);
    double prob = 1.0;
    for (std::int64_t m = 0; m < opponents; ++m) {
      counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(m)])] += 1;
      prob *= mixture(assignment[static_cast<std::size_t>(m)]);
    }
    u += prob * spec.payoffs(counts);
    // Odometer over ordered assignments.
    std::int64_t pos = 0;
    while (pos < opponents) {
      auto& digit = assignment[static_cast<std::size_t>(pos)];
      if (++digit < spec.actions) break;
      digit = 0;
      ++pos;
    }
    if (pos == opponents) break;
  }
  return u;
}

}  // namespace symgames
