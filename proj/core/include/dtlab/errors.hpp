#pragma once

#include <stdexcept>
#include <string>

namespace dtlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter or malformed input.  CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Request exceeds a configured resource ceiling.  CLI exit code 3.
struct BudgetError : Error {
  using Error::Error;
};

// Filesystem failure.  CLI exit code 4.
struct IoError : Error {
  using Error::Error;
};

// Fixed-width arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

}  // namespace dtlab
