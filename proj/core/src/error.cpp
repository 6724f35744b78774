#include "exgs/error.hpp"

namespace exgs {

TruncationError::TruncationError(const std::string& what, std::size_t expected, std::size_t actual)
    : FormatError(what + ": expected " + std::to_string(expected) + " bytes, got " +
                  std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

}  // namespace exgs
