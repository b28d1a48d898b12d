#pragma once

#include <stdexcept>
#include <string>

namespace spinrc {

// Error taxonomy. Exit-code mapping lives in the CLI: config errors -> 2,
// data errors -> 3, numerical divergence -> 4.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadLength : DataError {
  using DataError::DataError;
};

struct OutOfRange : DataError {
  using DataError::DataError;
};

struct ShapeMismatch : DataError {
  using DataError::DataError;
};

struct BadMagic : DataError {
  using DataError::DataError;
};

struct DimensionMismatch : DataError {
  using DataError::DataError;
};

struct CountMismatch : DataError {
  using DataError::DataError;
};

struct TruncatedFile : DataError {
  using DataError::DataError;
};

struct ZeroVariance : DataError {
  using DataError::DataError;
};

struct IndependenceViolation : ConfigError {
  using ConfigError::ConfigError;
};

struct Diverged : NumericalError {
  using NumericalError::NumericalError;
};

struct NonFinite : NumericalError {
  using NumericalError::NumericalError;
};

struct Singular : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace spinrc
