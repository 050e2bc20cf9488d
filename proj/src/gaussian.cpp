#include "xrayq/gaussian.hpp"

#include <cmath>

namespace xrayq {

Eigen::VectorXd gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian_kernel: sigma must be positive");
  }
  const auto half = static_cast<Eigen::Index>(std::ceil(3.0 * sigma));
  Eigen::VectorXd k(2 * half + 1);
  for (Eigen::Index i = -half; i <= half; ++i) {
    const double x = static_cast<double>(i);
    k(i + half) = std::exp(-x * x / (2.0 * sigma * sigma));
  }
  k /= k.sum();
  // Symmetrize explicitly so k[i] == k[n-1-i] holds bit-for-bit.
  for (Eigen::Index i = 0; i < half; ++i) k(2 * half - i) = k(i);
  return k;
}

FloatImage convolve_rows(const FloatImage& img, const Eigen::VectorXd& kernel, PadMode mode) {
  const Eigen::Index half = kernel.size() / 2;
  const Eigen::Index w = img.cols();
  if (mode == PadMode::Reflect && half > 0 && half >= w) {
    throw InvalidArgument("gaussian_blur: reflect margin exceeds image width");
  }
  FloatImage out(img.rows(), w);
  Eigen::VectorXd line(w + 2 * half);
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    for (Eigen::Index x = -half; x < w + half; ++x) {
      const Eigen::Index sx = detail::border_index(x, w, mode);
      line(x + half) = sx < 0 ? 0.0 : img(y, sx);
    }
    for (Eigen::Index x = 0; x < w; ++x) {
      out(y, x) = line.segment(x, kernel.size()).dot(kernel);
    }
  }
  return out;
}

FloatImage convolve_cols(const FloatImage& img, const Eigen::VectorXd& kernel, PadMode mode) {
  const Eigen::Index half = kernel.size() / 2;
  const Eigen::Index h = img.rows();
  if (mode == PadMode::Reflect && half > 0 && half >= h) {
    throw InvalidArgument("gaussian_blur: reflect margin exceeds image height");
  }
  FloatImage out = FloatImage::Zero(h, img.cols());
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index k = 0; k < kernel.size(); ++k) {
      const Eigen::Index sy = detail::border_index(y + k - half, h, mode);
      if (sy < 0) continue;
      out.row(y) += kernel(k) * img.row(sy);
    }
  }
  return out;
}

FloatImage gaussian_blur(const FloatImage& img, double sigma, PadMode mode) {
  const Eigen::VectorXd k = gaussian_kernel(sigma);
  return convolve_cols(convolve_rows(img, k, mode), k, mode);
}

}  // namespace xrayq
