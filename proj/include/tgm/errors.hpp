#pragma once

#include <stdexcept>
#include <string>

namespace tgm {

/// Raised when a computation produces or receives non-finite values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive operation would exceed the configured state cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tgm
