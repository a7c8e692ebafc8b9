#pragma once

#include <stdexcept>
#include <string>

namespace egbm {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad CSV, schema mismatch, non-finite values.
class DataError : public Error {
 public:
  using Error::Error;
};

// Targets with zero variance cannot be standardized.
class DegenerateTargetError : public Error {
 public:
  using Error::Error;
};

// A configuration value outside its admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Model file cannot be read: bad version, truncated or malformed content.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// A black box violated its query contract.
class AdapterError : public Error {
 public:
  using Error::Error;
};

}  // namespace egbm
