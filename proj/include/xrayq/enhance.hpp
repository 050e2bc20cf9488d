#pragma once

#include <cstdint>

#include "xrayq/exposure.hpp"
#include "xrayq/image.hpp"

namespace xrayq {

struct ClaheParams {
  int window = 15;      // odd side length of the square region, >= 3
  int clip_limit = 2;   // max count per bin before redistribution
  int iterations = 1;   // clipping passes

  // Default clip limit for a window: max(1, round(0.01 * window^2)).
  static ClaheParams for_window(int window);

  void validate() const;
};

struct UnsharpParams {
  double radius = 1.0;  // Gaussian sigma in pixels
  double amount = 1.0;

  void validate() const;
};

// Clips every bin at clip_limit and spreads the excess evenly over all 256
// bins; the remainder (excess mod 256) goes one count each to the lowest bins.
// Repeated `iterations` times. The total count is preserved.
Histogram clip_histogram(const Histogram& hist, std::int64_t clip_limit, int iterations);

// Per-pixel sliding-window CLAHE, reference implementation: the clipped
// histogram is rebuilt from scratch for every pixel.
GrayImage clahe(const GrayImage& img, const ClaheParams& params);

// Same output as clahe(), bit for bit, using per-column histograms that slide
// down the image and a window histogram that slides across each row.
GrayImage clahe_fast(const GrayImage& img, const ClaheParams& params);

// img + amount * (img - blur(img)), before rounding.
FloatImage unsharp_mask(const FloatImage& img, const UnsharpParams& params);
GrayImage unsharp_mask(const GrayImage& img, const UnsharpParams& params);

}  // namespace xrayq
