#pragma once

#include <stdexcept>

namespace walshlp {

// Thrown when a mathematical identity the pipeline guarantees fails to hold
// within tolerance, and by the verification suites on the first violated
// invariant.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace walshlp
