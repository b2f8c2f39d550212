#pragma once

#include <stdexcept>

namespace fleetsup {

/// An instance exceeds the size an exhaustive routine is allowed to handle.
class SizingError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// No valid path exists, e.g. the control center is unreachable in a sparse instance.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fleetsup
