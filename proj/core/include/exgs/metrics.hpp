#pragma once

#include <string>

#include "exgs/image.hpp"

namespace exgs {

// Returned by psnr() for identical images.
inline constexpr double kPsnrCap = 99.0;

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

struct ImageQualityReport {
  double psnr = 0.0;
  double ssim = 0.0;
  int width = 0;
  int height = 0;
};

// 10 log10(1 / MSE) over all channels; kPsnrCap when MSE is zero.
double psnr(const Image& a, const Image& b);

// Gaussian-windowed SSIM on the channel-mean grayscale, averaged over every window
// position that lies fully inside the image (no padding).
double ssim(const Image& a, const Image& b, const SsimParams& params = {});

ImageQualityReport evaluate(const Image& a, const Image& b);

// {"psnr": .., "ssim": .., "width": .., "height": ..}
std::string to_json(const ImageQualityReport& report);

}  // namespace exgs
