#pragma once

#include <Eigen/Dense>

#include "xrayq/image.hpp"

namespace xrayq {

// Sampled Gaussian truncated at 3 sigma: length 2*ceil(3*sigma)+1, sums to 1.
Eigen::VectorXd gaussian_kernel(double sigma);

// Separable blur: horizontal pass, then vertical pass. Output has the input size.
FloatImage gaussian_blur(const FloatImage& img, double sigma, PadMode mode);

// Convolves every row (horizontal) or column (vertical) with a symmetric 1-D kernel.
FloatImage convolve_rows(const FloatImage& img, const Eigen::VectorXd& kernel, PadMode mode);
FloatImage convolve_cols(const FloatImage& img, const Eigen::VectorXd& kernel, PadMode mode);

}  // namespace xrayq
