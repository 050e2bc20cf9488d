#pragma once

#include "xrayq/image.hpp"

namespace xrayq {

// Output/input linear scale plus the output size it produces.
struct ScaleSpec {
  double factor = 1.0;
  Eigen::Index out_width = 1;
  Eigen::Index out_height = 1;

  // out dims = round(factor * in dims), at least 1.
  static ScaleSpec from_factor(double factor, Eigen::Index in_width, Eigen::Index in_height);

  void validate() const;
};

// Keys cubic convolution kernel with a = -0.5.
double cubic_kernel(double t);

// Source coordinate sampled by output index `out` under center alignment.
inline double source_coordinate(Eigen::Index out, double factor) {
  return (static_cast<double>(out) + 0.5) / factor - 0.5;
}

// Bicubic resampling with replicated borders, returned before rounding.
FloatImage bicubic_resize(const FloatImage& img, const ScaleSpec& spec);
GrayImage bicubic_resize(const GrayImage& img, const ScaleSpec& spec);

// Upscale (or downscale) to an explicit size, using factor out_width / in_width.
GrayImage bicubic_to_size(const GrayImage& img, Eigen::Index out_width, Eigen::Index out_height);

// Optional Gaussian blur followed by bicubic downscaling by 1/factor.
// Output size is ceil(in / factor).
GrayImage degrade(const GrayImage& img, int factor, double blur_sigma);

}  // namespace xrayq
