#pragma once

#include <limits>

#include "xrayq/image.hpp"

namespace xrayq {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

struct QualityScore {
  double mse = 0.0;
  double psnr_db = kInfinitePsnr;
  double ssim = 1.0;
};

struct SsimParams {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  int dynamic_range = 255;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  void validate() const;
};

// Mean squared error normalized by the pixel count.
double mse(const GrayImage& a, const GrayImage& b);

// 10 log10(peak^2 / mse); +inf when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b, int peak = 255);

// Mean SSIM over every position where the full Gaussian window fits.
double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params = {});

// The normalized 2-D Gaussian window SSIM uses: outer product of a sampled
// 1-D Gaussian of length `window`.
Eigen::VectorXd ssim_window_1d(const SsimParams& params);

QualityScore score(const GrayImage& reference, const GrayImage& test, int peak = 255,
                   const SsimParams& params = {});

}  // namespace xrayq
