#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "xrayq/errors.hpp"

namespace xrayq {

// Row-major 2-D raster. rows() is the image height, cols() the width.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 8-bit single-channel image; the uint8 scalar carries the [0, 255] invariant.
using GrayImage = Plane<std::uint8_t>;

// Double-precision intermediate image, unbounded.
using FloatImage = Plane<double>;

enum class PadMode { Reflect, Replicate, Zero };

inline double round_half_away(double v) { return std::round(v); }

inline std::uint8_t clamp_to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0.0, 255.0));
}

inline FloatImage to_float(const GrayImage& img) { return img.cast<double>(); }

// Rounds half away from zero and clamps to [0, 255].
inline GrayImage to_gray(const FloatImage& img) {
  return img.unaryExpr([](double v) { return clamp_to_byte(v); });
}

namespace detail {

// Maps an out-of-range index onto [0, n) for the given border mode.
// Returns -1 for Zero mode outside the image.
inline Eigen::Index border_index(Eigen::Index i, Eigen::Index n, PadMode mode) {
  if (i >= 0 && i < n) return i;
  switch (mode) {
    case PadMode::Reflect:
      // whole-sample symmetric: -1 -> 1, n -> n-2
      return i < 0 ? -i : 2 * (n - 1) - i;
    case PadMode::Replicate:
      return i < 0 ? 0 : n - 1;
    case PadMode::Zero:
      return -1;
  }
  return -1;
}

}  // namespace detail

template <typename Scalar>
Plane<Scalar> pad(const Plane<Scalar>& img, Eigen::Index margin, PadMode mode) {
  if (margin < 0) throw InvalidArgument("pad: negative margin");
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  if (mode == PadMode::Reflect && margin > 0 && (margin >= w || margin >= h)) {
    throw InvalidArgument("pad: reflect margin " + std::to_string(margin) +
                          " requires an image larger than the margin in both dimensions");
  }
  Plane<Scalar> out(h + 2 * margin, w + 2 * margin);
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    const Eigen::Index sy = detail::border_index(y - margin, h, mode);
    for (Eigen::Index x = 0; x < out.cols(); ++x) {
      const Eigen::Index sx = detail::border_index(x - margin, w, mode);
      out(y, x) = (sy < 0 || sx < 0) ? Scalar(0) : img(sy, sx);
    }
  }
  return out;
}

// Inverse of pad(): drops `margin` pixels from every side.
template <typename Scalar>
Plane<Scalar> crop(const Plane<Scalar>& img, Eigen::Index margin) {
  return img.block(margin, margin, img.rows() - 2 * margin, img.cols() - 2 * margin);
}

}  // namespace xrayq
