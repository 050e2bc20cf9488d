#include "xrayq/exposure.hpp"

#include <array>

namespace xrayq {

Histogram histogram(const GrayImage& img) {
  Histogram h;
  const std::uint8_t* p = img.data();
  for (Eigen::Index i = 0; i < img.size(); ++i) ++h.bins(p[i]);
  h.total = img.size();
  return h;
}

std::string_view to_string(ExposureClass c) {
  switch (c) {
    case ExposureClass::UnderExposed: return "Under";
    case ExposureClass::OverExposed: return "Over";
    case ExposureClass::Normal: return "Normal";
  }
  return "Normal";
}

ExposureReport classify_exposure(const GrayImage& img, double threshold) {
  if (!(threshold > 0.5 && threshold <= 1.0)) {
    throw InvalidArgument("classify_exposure: threshold must lie in (0.5, 1]");
  }
  const Histogram h = histogram(img);
  const std::int64_t lower = h.bins.head<128>().sum();
  const std::int64_t upper = h.total - lower;
  ExposureReport r;
  r.threshold = threshold;
  r.lower_mass = static_cast<double>(lower) / static_cast<double>(h.total);
  r.upper_mass = static_cast<double>(upper) / static_cast<double>(h.total);
  if (r.lower_mass >= threshold) {
    r.exposure = ExposureClass::UnderExposed;
  } else if (r.upper_mass >= threshold) {
    r.exposure = ExposureClass::OverExposed;
  } else {
    r.exposure = ExposureClass::Normal;
  }
  return r;
}

GrayImage equalize(const GrayImage& img) {
  const Histogram h = histogram(img);
  std::array<std::uint8_t, 256> lut{};
  std::int64_t running = 0;
  for (int v = 0; v < 256; ++v) {
    running += h.bins(v);
    lut[v] = scale_fraction_to_byte(running, h.total);
  }
  return img.unaryExpr([&lut](std::uint8_t v) { return lut[v]; });
}

GrayImage stretch(const GrayImage& img) {
  const int lo = img.minCoeff();
  const int hi = img.maxCoeff();
  if (lo == hi) return img;
  return img.unaryExpr([lo, hi](std::uint8_t v) {
    return scale_fraction_to_byte(v - lo, hi - lo);
  });
}

GrayImage normalize_intensity(const GrayImage& img, EqualizeMode mode) {
  return mode == EqualizeMode::HistEq ? equalize(img) : stretch(img);
}

}  // namespace xrayq
