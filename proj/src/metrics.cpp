#include "xrayq/metrics.hpp"

#include <cmath>
#include <string>

namespace xrayq {

namespace {

void require_same_shape(const GrayImage& a, const GrayImage& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": image dimensions differ (" + std::to_string(a.cols()) +
                     "x" + std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" +
                     std::to_string(b.rows()) + ")");
  }
}

// "Valid" correlation with a separable kernel: output shrinks by k-1 per axis.
FloatImage filter_valid(const FloatImage& img, const Eigen::VectorXd& k) {
  const Eigen::Index n = k.size();
  const Eigen::Index oh = img.rows() - n + 1;
  const Eigen::Index ow = img.cols() - n + 1;
  FloatImage horiz(img.rows(), ow);
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    for (Eigen::Index x = 0; x < ow; ++x) {
      horiz(y, x) = img.row(y).segment(x, n).matrix().dot(k);
    }
  }
  FloatImage out = FloatImage::Zero(oh, ow);
  for (Eigen::Index i = 0; i < n; ++i) out += k(i) * horiz.middleRows(i, oh);
  return out;
}

}  // namespace

void SsimParams::validate() const {
  if (window < 1 || window % 2 == 0) throw InvalidArgument("ssim: window must be odd and positive");
  if (!(gaussian_sigma > 0.0)) throw InvalidArgument("ssim: gaussian_sigma must be positive");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw InvalidArgument("ssim: k1 and k2 must be positive");
  if (dynamic_range < 1) throw InvalidArgument("ssim: dynamic range must be positive");
}

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "mse");
  const Eigen::ArrayXXd diff = a.cast<double>() - b.cast<double>();
  return diff.square().sum() / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b, int peak) {
  if (peak < 1) throw InvalidArgument("psnr: peak must be positive");
  const double e = mse(a, b);
  if (e == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(static_cast<double>(peak) * peak / e);
}

Eigen::VectorXd ssim_window_1d(const SsimParams& params) {
  params.validate();
  const int half = params.window / 2;
  Eigen::VectorXd k(params.window);
  for (int i = -half; i <= half; ++i) {
    k(i + half) = std::exp(-static_cast<double>(i * i) / (2.0 * params.gaussian_sigma * params.gaussian_sigma));
  }
  return k / k.sum();
}

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params) {
  require_same_shape(a, b, "ssim");
  params.validate();
  if (a.rows() < params.window || a.cols() < params.window) {
    throw InvalidArgument("ssim: image smaller than the " + std::to_string(params.window) + "px window");
  }
  const Eigen::VectorXd k = ssim_window_1d(params);
  const FloatImage x = a.cast<double>();
  const FloatImage y = b.cast<double>();

  const FloatImage mu_x = filter_valid(x, k);
  const FloatImage mu_y = filter_valid(y, k);
  const FloatImage var_x = filter_valid(x * x, k) - mu_x * mu_x;
  const FloatImage var_y = filter_valid(y * y, k) - mu_y * mu_y;
  const FloatImage cov = filter_valid(x * y, k) - mu_x * mu_y;

  const double c1 = params.c1();
  const double c2 = params.c2();
  const FloatImage num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2);
  const FloatImage den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2);
  return (num / den).mean();
}

QualityScore score(const GrayImage& reference, const GrayImage& test, int peak, const SsimParams& params) {
  QualityScore s;
  s.mse = mse(reference, test);
  s.psnr_db = psnr(reference, test, peak);
  s.ssim = ssim(reference, test, params);
  return s;
}

}  // namespace xrayq
