#ifndef SYMGAMES_ERRORS_HPP
#define SYMGAMES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace symgames {

// Base class for everything thrown by the library; the C API maps each
// subclass to a status code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact integer result (repetitions, table sizes) does not fit in a
// signed 64-bit integer. Signals that the log-space representation must
// be used instead.
struct OverflowError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct RangeError : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct NonFinitePayoff : Error {
  using Error::Error;
};

// pure_payoff queried for an action with zero count in the profile.
struct ActionNotPlayed : Error {
  using Error::Error;
};

struct EmptySupport : Error {
  using Error::Error;
};

// Replicator-dynamics offset exceeded a deviation payoff.
struct NegativeWeight : Error {
  using Error::Error;
};

struct UnsupportedOperation : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace symgames

#endif  // SYMGAMES_ERRORS_HPP
