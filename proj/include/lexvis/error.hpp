#pragma once

#include <stdexcept>
#include <string>

namespace lexvis {

// Malformed or inconsistent input data (bad files, dimension mismatches,
// degenerate vectors). CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undefined rank statistics (constant input on either side).
class DegenerateStatsError : public DataError {
 public:
  using DataError::DataError;
};

// Invalid run configuration (zero epochs, negative rates, bad grid specs).
// CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss. CLI maps this to exit code 3.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexvis
