#include "xrayq/enhance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace xrayq {

ClaheParams ClaheParams::for_window(int window) {
  ClaheParams p;
  p.window = window;
  p.clip_limit = std::max(1, static_cast<int>(std::lround(0.01 * window * window)));
  return p;
}

void ClaheParams::validate() const {
  if (window < 3 || window % 2 == 0) throw InvalidArgument("clahe: window must be odd and >= 3");
  if (clip_limit < 1) throw InvalidArgument("clahe: clip_limit must be >= 1");
  if (iterations < 1) throw InvalidArgument("clahe: iterations must be >= 1");
}

Histogram clip_histogram(const Histogram& hist, std::int64_t clip_limit, int iterations) {
  Histogram out = hist;
  for (int it = 0; it < iterations; ++it) {
    std::int64_t excess = 0;
    for (int v = 0; v < 256; ++v) {
      if (out.bins(v) > clip_limit) {
        excess += out.bins(v) - clip_limit;
        out.bins(v) = clip_limit;
      }
    }
    if (excess == 0) break;
    out.bins += excess / 256;
    const std::int64_t remainder = excess % 256;
    out.bins.head(remainder) += 1;
  }
  return out;
}

namespace {

void check_window_fits(const GrayImage& img, const ClaheParams& params) {
  params.validate();
  const Eigen::Index min_dim = std::min(img.rows(), img.cols());
  if (params.window >= 2 * min_dim) {
    throw InvalidArgument("clahe: window " + std::to_string(params.window) +
                          " too large for a " + std::to_string(img.cols()) + "x" +
                          std::to_string(img.rows()) + " image");
  }
}

std::int64_t cdf_at(const Histogram& h, int value) {
  return h.bins.head(value + 1).sum();
}

}  // namespace

GrayImage clahe(const GrayImage& img, const ClaheParams& params) {
  check_window_fits(img, params);
  const int margin = (params.window - 1) / 2;
  const GrayImage padded = pad(img, margin, PadMode::Reflect);
  const std::int64_t area = static_cast<std::int64_t>(params.window) * params.window;

  GrayImage out(img.rows(), img.cols());
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      Histogram h;
      for (int dy = 0; dy < params.window; ++dy) {
        for (int dx = 0; dx < params.window; ++dx) ++h.bins(padded(y + dy, x + dx));
      }
      h.total = area;
      const Histogram clipped = clip_histogram(h, params.clip_limit, params.iterations);
      out(y, x) = scale_fraction_to_byte(cdf_at(clipped, img(y, x)), area);
    }
  }
  return out;
}

namespace {

// Column histograms: cols[c] counts padded rows y .. y+win-1 of padded column
// c. Moving down a row is one remove and one add per column; moving right is
// window += cols[x+win-1] - cols[x-1], fused with the clipped-CDF pass so both
// run as one vectorized sweep over the 256 bins. Count is int16 whenever the
// window area fits, which doubles the SIMD width.
template <typename Count>
GrayImage clahe_columns(const GrayImage& img, const GrayImage& padded, const ClaheParams& params) {
  const int win = params.window;
  const std::int64_t area = static_cast<std::int64_t>(win) * win;
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const Eigen::Index pw = padded.cols();
  const Count clip = static_cast<Count>(std::min<std::int64_t>(params.clip_limit, area));

  std::vector<Count> cols(static_cast<std::size_t>(pw) * 256, 0);
  auto col = [&](Eigen::Index c) { return cols.data() + c * 256; };
  for (int dy = 0; dy < win; ++dy) {
    for (Eigen::Index c = 0; c < pw; ++c) ++col(c)[padded(dy, c)];
  }

  alignas(64) std::array<Count, 256> window{};
  const std::array<Count, 256> none{};
  GrayImage out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    if (y > 0) {
      for (Eigen::Index c = 0; c < pw; ++c) {
        --col(c)[padded(y - 1, c)];
        ++col(c)[padded(y + win - 1, c)];
      }
    }
    window.fill(0);
    for (int c = 0; c < win - 1; ++c) {
      const Count* src = col(c);
      for (int v = 0; v < 256; ++v) window[v] += src[v];
    }
    for (Eigen::Index x = 0; x < w; ++x) {
      const Count* in = col(x + win - 1);
      const Count* gone = x > 0 ? col(x - 1) : none.data();
      const int value = img(y, x);
      std::int64_t num;
      if (params.iterations == 1) {
        // bins 0..value feed the prefix, the rest only the clipped total
        Count prefix = 0;
        Count rest = 0;
        for (int v = 0; v <= value; ++v) {
          const Count c = static_cast<Count>(window[v] + in[v] - gone[v]);
          window[v] = c;
          prefix = static_cast<Count>(prefix + std::min(c, clip));
        }
        for (int v = value + 1; v < 256; ++v) {
          const Count c = static_cast<Count>(window[v] + in[v] - gone[v]);
          window[v] = c;
          rest = static_cast<Count>(rest + std::min(c, clip));
        }
        const std::int64_t total = std::int64_t{prefix} + rest;
        const std::int64_t excess = area - total;
        num = prefix + (value + 1) * (excess / 256) + std::min<std::int64_t>(value + 1, excess % 256);
      } else {
        Histogram hist;
        for (int v = 0; v < 256; ++v) {
          window[v] = static_cast<Count>(window[v] + in[v] - gone[v]);
          hist.bins(v) = window[v];
        }
        hist.total = area;
        num = cdf_at(clip_histogram(hist, params.clip_limit, params.iterations), value);
      }
      out(y, x) = scale_fraction_to_byte(num, area);
    }
  }
  return out;
}

}  // namespace

GrayImage clahe_fast(const GrayImage& img, const ClaheParams& params) {
  check_window_fits(img, params);
  const int margin = (params.window - 1) / 2;
  const GrayImage padded = pad(img, margin, PadMode::Reflect);
  const std::int64_t area = static_cast<std::int64_t>(params.window) * params.window;
  if (area <= std::numeric_limits<std::int16_t>::max()) return clahe_columns<std::int16_t>(img, padded, params);
  if (area <= std::numeric_limits<std::int32_t>::max()) return clahe_columns<std::int32_t>(img, padded, params);
  throw InvalidArgument("clahe: window too large");
}

}  // namespace xrayq
