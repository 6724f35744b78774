#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exgs/gaussian.hpp"
#include "exgs/rasterizer.hpp"

namespace exgs {

// Global significance per Gaussian, summed over every pixel ray of every view.
struct SignificanceVector {
  std::vector<float> scores;
  std::uint32_t views_used = 0;
  ScoringMode mode = ScoringMode::Literal;
};

// A ray credits Gaussian j when j's evaluated alpha reaches 1/255 and the ray's
// transmittance in front of j is still at least 1e-4. Literal mode credits
// sigma_j * T, contribution mode alpha_ij * T. Sums run in double and are stored as float.
SignificanceVector compute_significance(const GaussianCloud& cloud, std::span<const Camera> cameras,
                                        ScoringMode mode = ScoringMode::Literal, unsigned threads = 0);

// Exhaustive (view, pixel, splat) enumeration of the same quantity. Test oracle.
SignificanceVector compute_significance_oracle(const GaussianCloud& cloud, std::span<const Camera> cameras,
                                               ScoringMode mode = ScoringMode::Literal);

std::string_view to_string(ScoringMode mode);
// Accepts "literal" or "contribution"; throws InvalidParameterError otherwise.
ScoringMode parse_scoring_mode(std::string_view text);

// Flat binary: u32 LE count, then count LE float32 scores.
std::vector<std::uint8_t> encode_scores(std::span<const float> scores);
std::vector<float> decode_scores(std::span<const std::uint8_t> bytes);
// "index,score" lines with a header row.
std::string scores_to_csv(std::span<const float> scores);

}  // namespace exgs
