#include "xrayq/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "xrayq/rng.hpp"

namespace xrayq {

namespace {

constexpr std::array<PhantomKind, 4> kKindCycle = {PhantomKind::Ellipses, PhantomKind::Bars,
                                                   PhantomKind::Gradient, PhantomKind::Mixed};

struct Ellipse {
  double cx, cy, rx, ry, angle, value;
};

// Coverage in [0, 1] of pixel (x, y) by the ellipse, with a ~1.5 px soft edge.
double ellipse_coverage(const Ellipse& e, double x, double y) {
  const double c = std::cos(e.angle);
  const double s = std::sin(e.angle);
  const double dx = x - e.cx;
  const double dy = y - e.cy;
  const double u = (c * dx + s * dy) / e.rx;
  const double v = (-s * dx + c * dy) / e.ry;
  const double r = std::sqrt(u * u + v * v);
  // signed distance to the boundary, approximately in pixels
  const double d = (1.0 - r) * std::min(e.rx, e.ry);
  const double t = std::clamp(d / 1.5 + 0.5, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

void paint(FloatImage& canvas, const Ellipse& e) {
  for (Eigen::Index y = 0; y < canvas.rows(); ++y) {
    for (Eigen::Index x = 0; x < canvas.cols(); ++x) {
      const double a = ellipse_coverage(e, static_cast<double>(x), static_cast<double>(y));
      if (a > 0.0) canvas(y, x) = (1.0 - a) * canvas(y, x) + a * e.value;
    }
  }
}

// Inner structures placed inside the central region of the image.
void paint_inner_ellipses(FloatImage& canvas, Rng& rng, int count, double spread) {
  const double w = static_cast<double>(canvas.cols());
  const double h = static_cast<double>(canvas.rows());
  for (int i = 0; i < count; ++i) {
    Ellipse e;
    e.cx = w * (0.5 + spread * rng.uniform(-1.0, 1.0));
    e.cy = h * (0.5 + spread * rng.uniform(-1.0, 1.0));
    e.rx = w * rng.uniform(0.05, 0.14);
    e.ry = h * rng.uniform(0.05, 0.14);
    e.angle = rng.uniform(0.0, std::numbers::pi);
    // graded intensities: later structures are denser
    e.value = 175.0 + 60.0 * (count > 1 ? static_cast<double>(i) / (count - 1) : 0.5) +
              rng.uniform(-8.0, 8.0);
    paint(canvas, e);
  }
}

// Alternating 0/255 line pairs, half-period decreasing from `start` down to 1
// across `groups` groups, filling columns [x0, x1) of rows [y0, y1).
void paint_bars(FloatImage& canvas, Eigen::Index x0, Eigen::Index x1, Eigen::Index y0,
                Eigen::Index y1, int groups, int start) {
  const Eigen::Index span = x1 - x0;
  for (Eigen::Index x = x0; x < x1; ++x) {
    const Eigen::Index local = x - x0;
    const int group = static_cast<int>(std::min<Eigen::Index>(groups - 1, local * groups / span));
    const Eigen::Index group_start = (span * group + groups - 1) / groups;
    const int half_period =
        std::max(1, static_cast<int>(std::lround(start * (1.0 - static_cast<double>(group) / groups))));
    const bool dark = ((local - group_start) / half_period) % 2 == 0;
    canvas.block(y0, x, y1 - y0, 1).setConstant(dark ? 0.0 : 255.0);
  }
}

FloatImage draw_gradient(const PhantomSpec& spec) {
  FloatImage canvas(spec.height, spec.width);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) canvas(y, x) = gradient_value(x, y, spec.width, spec.height, spec.seed);
  }
  return canvas;
}

FloatImage draw_ellipses(const PhantomSpec& spec, Rng& rng) {
  const double w = spec.width;
  const double h = spec.height;
  FloatImage canvas = FloatImage::Constant(spec.height, spec.width, 20.0);
  Ellipse body{w * 0.5 + rng.uniform(-0.02, 0.02) * w, h * 0.5 + rng.uniform(-0.02, 0.02) * h,
               w * rng.uniform(0.43, 0.47), h * rng.uniform(0.43, 0.47), rng.uniform(-0.2, 0.2), 150.0};
  paint(canvas, body);
  // mild tissue shading inside the body
  const double tilt = rng.uniform(-12.0, 12.0);
  for (Eigen::Index y = 0; y < canvas.rows(); ++y) {
    for (Eigen::Index x = 0; x < canvas.cols(); ++x) {
      if (canvas(y, x) > 128.0) canvas(y, x) += tilt * (static_cast<double>(x) / w - 0.5);
    }
  }
  paint_inner_ellipses(canvas, rng, spec.count, 0.22);
  return canvas;
}

FloatImage draw_bars(const PhantomSpec& spec) {
  FloatImage canvas = FloatImage::Constant(spec.height, spec.width, 150.0);
  const Eigen::Index y0 = spec.height * 15 / 100;
  const Eigen::Index y1 = spec.height * 85 / 100;
  paint_bars(canvas, 0, spec.width, y0, y1, std::max(1, spec.count), std::max(2, spec.width / 12));
  return canvas;
}

FloatImage draw_mixed(const PhantomSpec& spec, Rng& rng) {
  FloatImage canvas = draw_gradient(spec);
  paint_inner_ellipses(canvas, rng, std::max(1, spec.count / 2), 0.2);
  const Eigen::Index y0 = spec.height * 8 / 100;
  const Eigen::Index y1 = spec.height * 22 / 100;
  paint_bars(canvas, spec.width / 8, spec.width * 7 / 8, y0, y1, 3, std::max(2, spec.width / 24));
  return canvas;
}

}  // namespace

std::string_view to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::Ellipses: return "ellipses";
    case PhantomKind::Bars: return "bars";
    case PhantomKind::Gradient: return "gradient";
    case PhantomKind::Mixed: return "mixed";
  }
  return "mixed";
}

std::optional<PhantomKind> parse_phantom_kind(std::string_view s) {
  for (PhantomKind k : kKindCycle) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

void PhantomSpec::validate() const {
  if (width < 48 || height < 48) throw InvalidArgument("phantom dimensions must be >= 48");
  if (count < 1) throw InvalidArgument("phantom count must be >= 1");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be non-negative");
  if (!(exposure_bias >= -1.0 && exposure_bias <= 1.0)) throw InvalidArgument("exposure_bias must lie in [-1, 1]");
}

double gradient_value(int x, int y, int width, int height, std::uint64_t seed) {
  double s = 0.0;
  switch (seed % 4) {
    case 0: s = static_cast<double>(x) / (width - 1); break;
    case 1: s = 1.0 - static_cast<double>(x) / (width - 1); break;
    case 2: s = static_cast<double>(y) / (height - 1); break;
    default: s = 1.0 - static_cast<double>(y) / (height - 1); break;
  }
  return 40.0 + 200.0 * s;
}

GrayImage generate(const PhantomSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  FloatImage canvas;
  switch (spec.kind) {
    case PhantomKind::Ellipses: canvas = draw_ellipses(spec, rng); break;
    case PhantomKind::Bars: canvas = draw_bars(spec); break;
    case PhantomKind::Gradient: canvas = draw_gradient(spec); break;
    case PhantomKind::Mixed: canvas = draw_mixed(spec, rng); break;
  }
  if (spec.noise_sigma > 0.0) {
    Rng noise(spec.seed ^ 0x6e6f697365ULL);
    for (Eigen::Index i = 0; i < canvas.size(); ++i) canvas.data()[i] += spec.noise_sigma * noise.normal();
  }
  if (spec.exposure_bias != 0.0) canvas += spec.exposure_bias * 128.0;
  return to_gray(canvas);
}

PhantomSpec corpus_member_spec(int index, const PhantomSpec& base) {
  const auto start = std::find(kKindCycle.begin(), kKindCycle.end(), base.kind) - kKindCycle.begin();
  PhantomSpec s = base;
  s.seed = base.seed + static_cast<std::uint64_t>(index);
  s.kind = kKindCycle[static_cast<std::size_t>((start + index) % 4)];
  return s;
}

std::vector<GrayImage> make_corpus(int n, const PhantomSpec& base) {
  if (n < 1) throw InvalidArgument("make_corpus: n must be >= 1");
  std::vector<GrayImage> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(generate(corpus_member_spec(i, base)));
  return out;
}

}  // namespace xrayq
