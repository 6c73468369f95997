#pragma once

#include <stdexcept>
#include <string>

namespace triscore {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file or stream does not follow its declared format (bad header,
// unknown section, wrong version line).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Contents violate a dataset-level contract (empty train set, vocabulary
// gaps, inconsistent sections).
class DataError : public Error {
 public:
  using Error::Error;
};

// A function was called with arguments outside its contract.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A numeric computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Training diverged; the message names the failing epoch.
class TrainingError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace triscore
