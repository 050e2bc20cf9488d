#include "xrayq/resample.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "xrayq/gaussian.hpp"

namespace xrayq {

namespace {

constexpr double kCubicA = -0.5;

struct Taps {
  Eigen::Index first;             // index of the leftmost tap before clamping
  std::array<double, 4> weights;  // for first, first+1, first+2, first+3
};

std::vector<Taps> axis_taps(Eigen::Index out_len, double factor) {
  std::vector<Taps> taps(static_cast<std::size_t>(out_len));
  for (Eigen::Index o = 0; o < out_len; ++o) {
    const double src = source_coordinate(o, factor);
    const double base = std::floor(src);
    const double t = src - base;
    Taps& tp = taps[static_cast<std::size_t>(o)];
    tp.first = static_cast<Eigen::Index>(base) - 1;
    tp.weights = {cubic_kernel(1.0 + t), cubic_kernel(t), cubic_kernel(1.0 - t), cubic_kernel(2.0 - t)};
  }
  return taps;
}

Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

}  // namespace

ScaleSpec ScaleSpec::from_factor(double factor, Eigen::Index in_width, Eigen::Index in_height) {
  ScaleSpec s;
  s.factor = factor;
  s.out_width = std::max<Eigen::Index>(1, std::llround(factor * static_cast<double>(in_width)));
  s.out_height = std::max<Eigen::Index>(1, std::llround(factor * static_cast<double>(in_height)));
  s.validate();
  return s;
}

void ScaleSpec::validate() const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("scale factor must be positive");
  if (out_width < 1 || out_height < 1) throw InvalidArgument("output dimensions must be >= 1");
}

double cubic_kernel(double t) {
  const double x = std::abs(t);
  if (x <= 1.0) return ((kCubicA + 2.0) * x - (kCubicA + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((kCubicA * x - 5.0 * kCubicA) * x + 8.0 * kCubicA) * x - 4.0 * kCubicA;
  return 0.0;
}

FloatImage bicubic_resize(const FloatImage& img, const ScaleSpec& spec) {
  spec.validate();
  const Eigen::Index in_h = img.rows();
  const Eigen::Index in_w = img.cols();
  const std::vector<Taps> xt = axis_taps(spec.out_width, spec.factor);
  const std::vector<Taps> yt = axis_taps(spec.out_height, spec.factor);

  // Horizontal pass over every source row.
  FloatImage rows(in_h, spec.out_width);
  for (Eigen::Index y = 0; y < in_h; ++y) {
    for (Eigen::Index x = 0; x < spec.out_width; ++x) {
      const Taps& tp = xt[static_cast<std::size_t>(x)];
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) acc += tp.weights[i] * img(y, clamp_index(tp.first + i, in_w));
      rows(y, x) = acc;
    }
  }

  FloatImage out(spec.out_height, spec.out_width);
  for (Eigen::Index y = 0; y < spec.out_height; ++y) {
    const Taps& tp = yt[static_cast<std::size_t>(y)];
    for (Eigen::Index x = 0; x < spec.out_width; ++x) {
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += tp.weights[j] * rows(clamp_index(tp.first + j, in_h), x);
      out(y, x) = acc;
    }
  }
  return out;
}

GrayImage bicubic_resize(const GrayImage& img, const ScaleSpec& spec) {
  return to_gray(bicubic_resize(to_float(img), spec));
}

GrayImage bicubic_to_size(const GrayImage& img, Eigen::Index out_width, Eigen::Index out_height) {
  ScaleSpec s;
  s.factor = static_cast<double>(out_width) / static_cast<double>(img.cols());
  s.out_width = out_width;
  s.out_height = out_height;
  return bicubic_resize(img, s);
}

GrayImage degrade(const GrayImage& img, int factor, double blur_sigma) {
  if (factor < 2) throw InvalidArgument("degrade: factor must be >= 2");
  if (!(blur_sigma >= 0.0)) throw InvalidArgument("degrade: blur_sigma must be non-negative");
  FloatImage src = to_float(img);
  if (blur_sigma > 0.0) src = gaussian_blur(src, blur_sigma, PadMode::Replicate);
  ScaleSpec s;
  s.factor = 1.0 / factor;
  s.out_width = (img.cols() + factor - 1) / factor;
  s.out_height = (img.rows() + factor - 1) / factor;
  return to_gray(bicubic_resize(src, s));
}

}  // namespace xrayq
