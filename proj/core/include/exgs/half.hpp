#pragma once

#include <cstdint>

namespace exgs {

// IEEE 754 binary32 -> binary16, round to nearest, ties to even. Overflow gives ±inf,
// NaN stays NaN (quiet), subnormals are produced where representable.
std::uint16_t float_to_half(float value);

// Exact widening binary16 -> binary32.
float half_to_float(std::uint16_t bits);

inline float round_to_half(float value) { return half_to_float(float_to_half(value)); }

}  // namespace exgs
