#pragma once

#include <stdexcept>
#include <string>

namespace camel {

// Malformed input: bad files, dimension mismatches, invalid settings.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: NaN/Inf in an iterate or a factorization that
// cannot proceed. The CLI maps this to exit code 3.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace camel
