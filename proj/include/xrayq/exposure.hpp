#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

#include "xrayq/image.hpp"

namespace xrayq {

using HistogramBins = Eigen::Array<std::int64_t, 256, 1>;

struct Histogram {
  HistogramBins bins = HistogramBins::Zero();
  std::int64_t total = 0;
};

Histogram histogram(const GrayImage& img);

enum class ExposureClass { UnderExposed, OverExposed, Normal };

std::string_view to_string(ExposureClass c);

struct ExposureReport {
  ExposureClass exposure = ExposureClass::Normal;
  double lower_mass = 0.0;  // fraction of pixels with value <= 127
  double upper_mass = 0.0;  // fraction of pixels with value >= 128
  double threshold = 0.75;
};

inline constexpr double kDefaultExposureThreshold = 0.75;

// threshold must lie in (0.5, 1]. A mass equal to the threshold counts as skewed.
ExposureReport classify_exposure(const GrayImage& img, double threshold = kDefaultExposureThreshold);

// Global histogram equalization, T(v) = round(255 * cdf(v)).
GrayImage equalize(const GrayImage& img);

// Linear min-max stretch to [0, 255]. Constant images are returned unchanged.
GrayImage stretch(const GrayImage& img);

enum class EqualizeMode { HistEq, MinMax };

GrayImage normalize_intensity(const GrayImage& img, EqualizeMode mode);

// round(255 * count / total) with exact integer half-away-from-zero rounding.
inline std::uint8_t scale_fraction_to_byte(std::int64_t count, std::int64_t total) {
  return static_cast<std::uint8_t>((510 * count + total) / (2 * total));
}

}  // namespace xrayq
