#pragma once

#include <stdexcept>
#include <string>

namespace qswarm {

/// Input violates a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// A numerical kernel failed (e.g. SVD did not converge).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string &msg) {
    if (!cond) throw ValidationError(msg);
}

inline void require_dims(bool cond, const std::string &msg) {
    if (!cond) throw DimensionError(msg);
}

}  // namespace detail
}  // namespace qswarm
