#include "xrayq/enhance.hpp"

#include <cmath>

#include "xrayq/gaussian.hpp"

namespace xrayq {

void UnsharpParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("unsharp: radius must be positive");
  if (!(amount >= 0.0) || !std::isfinite(amount)) throw InvalidArgument("unsharp: amount must be non-negative");
}

FloatImage unsharp_mask(const FloatImage& img, const UnsharpParams& params) {
  params.validate();
  const FloatImage mask = img - gaussian_blur(img, params.radius, PadMode::Reflect);
  return img + params.amount * mask;
}

GrayImage unsharp_mask(const GrayImage& img, const UnsharpParams& params) {
  return to_gray(unsharp_mask(to_float(img), params));
}

}  // namespace xrayq
