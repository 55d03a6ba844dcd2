#ifndef SYMGAMES_NORMALIZATION_HPP
#define SYMGAMES_NORMALIZATION_HPP

namespace symgames {

// Positive affine map of raw payoffs onto [1e-5, 1e3]: the minimum raw payoff
// lands on kMinPayoff and the maximum on kMaxPayoff, which keeps every
// log-transformed table entry finite and standardizes solver hyperparameters.
struct NormalizationParams {
  static constexpr double kMinPayoff = 1e-5;
  static constexpr double kMaxPayoff = 1e3;

  double offset = 0.0;  // raw payoff sent to kMinPayoff
  double scale = 1.0;

  static NormalizationParams from_range(double raw_min, double raw_max) {
    NormalizationParams p;
    p.offset = raw_min;
    // Constant games collapse onto kMinPayoff with unit scale.
    p.scale = raw_max > raw_min ? (kMaxPayoff - kMinPayoff) / (raw_max - raw_min) : 1.0;
    return p;
  }

  double normalize(double raw) const { return (raw - offset) * scale + kMinPayoff; }
  double denormalize(double value) const { return (value - kMinPayoff) / scale + offset; }
};

}  // namespace symgames

#endif  // SYMGAMES_NORMALIZATION_HPP
