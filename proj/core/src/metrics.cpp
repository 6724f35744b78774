#include "exgs/metrics.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <vector>

#include "exgs/error.hpp"

namespace exgs {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidParameterError(std::string(what) + ": image shapes differ");
  if (a.pixel_count() == 0) throw InvalidParameterError(std::string(what) + ": empty image");
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(size);
  const double centre = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-(i - centre) * (i - centre) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> gray(const Image& img) {
  std::vector<double> g(img.pixel_count());
  for (std::size_t p = 0; p < g.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < img.channels; ++c) s += img.data[p * img.channels + c];
    g[p] = s / img.channels;
  }
  return g;
}

// Separable "valid" Gaussian filter: output is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return kPsnrCap;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b, const SsimParams& params) {
  require_same_shape(a, b, "ssim");
  if (a.width < params.window || a.height < params.window) {
    throw InvalidParameterError("ssim: image smaller than the " + std::to_string(params.window) + "x" +
                                std::to_string(params.window) + " window");
  }
  const int w = a.width, h = a.height;
  const auto kernel = gaussian_kernel(params.window, params.sigma);
  const auto ga = gray(a);
  const auto gb = gray(b);
  std::vector<double> aa(ga.size()), bb(ga.size()), ab(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) {
    aa[i] = ga[i] * ga[i];
    bb[i] = gb[i] * gb[i];
    ab[i] = ga[i] * gb[i];
  }
  const auto mu_a = filter_valid(ga, w, h, kernel);
  const auto mu_b = filter_valid(gb, w, h, kernel);
  const auto e_aa = filter_valid(aa, w, h, kernel);
  const auto e_bb = filter_valid(bb, w, h, kernel);
  const auto e_ab = filter_valid(ab, w, h, kernel);

  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

ImageQualityReport evaluate(const Image& a, const Image& b) {
  return {psnr(a, b), ssim(a, b), a.width, a.height};
}

std::string to_json(const ImageQualityReport& report) {
  const nlohmann::json j = {
      {"psnr", report.psnr}, {"ssim", report.ssim}, {"width", report.width}, {"height", report.height}};
  return j.dump(2) + "\n";
}

}  // namespace exgs
