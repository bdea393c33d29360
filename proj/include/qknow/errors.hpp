#pragma once

#include <stdexcept>
#include <string>

namespace qknow {

struct DimensionMismatch : std::invalid_argument {
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                              std::to_string(actual)) {}
};

struct ZeroVector : std::invalid_argument {
  ZeroVector() : std::invalid_argument("state vector must be nonzero") {}
};

struct InvalidFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidModel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operation defined only for single-question agents met an agent with several families.
struct MultiQuestionAgent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonCommutingFamilies : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooManyBlocks : std::length_error {
  using std::length_error::length_error;
};

struct UnknownName : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace qknow
