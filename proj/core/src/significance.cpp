#include "exgs/significance.hpp"

#include <cstdio>

#include "exgs/error.hpp"
#include "exgs/file_io.hpp"

namespace exgs {

SignificanceVector compute_significance(const GaussianCloud& cloud, std::span<const Camera> cameras,
                                        ScoringMode mode, unsigned threads) {
  if (cameras.empty()) throw InvalidParameterError("compute_significance: no cameras");
  SignificanceVector out;
  out.mode = mode;
  out.views_used = static_cast<std::uint32_t>(cameras.size());
  if (cloud.empty()) {
    for (const Camera& cam : cameras) cam.validate();
    return out;
  }

  RenderConfig cfg;
  cfg.tally = mode;
  cfg.threads = threads;
  // Views are reduced in list order so the sum is independent of scheduling.
  std::vector<double> total(cloud.size(), 0.0);
  for (const Camera& cam : cameras) {
    const RenderOutput view = render(cloud, cam, cfg);
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += view.tally[j].score;
  }
  out.scores.resize(total.size());
  for (std::size_t j = 0; j < total.size(); ++j) out.scores[j] = static_cast<float>(total[j]);
  return out;
}

std::string_view to_string(ScoringMode mode) {
  return mode == ScoringMode::Literal ? "literal" : "contribution";
}

ScoringMode parse_scoring_mode(std::string_view text) {
  if (text == "literal") return ScoringMode::Literal;
  if (text == "contribution") return ScoringMode::Contribution;
  throw InvalidParameterError("unknown scoring mode '" + std::string(text) + "'");
}

std::vector<std::uint8_t> encode_scores(std::span<const float> scores) { return encode_f32_vector(scores); }

std::vector<float> decode_scores(std::span<const std::uint8_t> bytes) { return decode_f32_vector(bytes); }

std::string scores_to_csv(std::span<const float> scores) {
  std::string out = "index,score\n";
  char line[64];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.9g\n", i, static_cast<double>(scores[i]));
    out += line;
  }
  return out;
}

}  // namespace exgs
