#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "xrayq/image.hpp"

namespace xrayq {

enum class PhantomKind { Ellipses, Bars, Gradient, Mixed };

std::string_view to_string(PhantomKind k);
std::optional<PhantomKind> parse_phantom_kind(std::string_view s);

struct PhantomSpec {
  int width = 96;
  int height = 96;
  std::uint64_t seed = 0;
  PhantomKind kind = PhantomKind::Mixed;
  int count = 6;              // ellipses, or bar groups
  double noise_sigma = 2.0;   // additive Gaussian noise, gray levels
  double exposure_bias = 0.0; // in [-1, 1]; shifts every pixel by bias * 128

  void validate() const;
};

// Radiograph-like test image; a pure function of the spec.
//
//   Ellipses: dark surround, a soft-tissue body ellipse, bright inner
//             structures of graded intensity.
//   Bars:     line pairs (0 / 255) of decreasing spacing on a mid-gray field.
//   Gradient: linear ramp 40 -> 240 along one of four directions picked by
//             the seed.
//   Mixed:    ramp background with inner ellipses and one bar group.
GrayImage generate(const PhantomSpec& spec);

// Noise-free Gradient value at (x, y) for a seed; used by generate().
double gradient_value(int x, int y, int width, int height, std::uint64_t seed);

// n phantoms with seeds base.seed .. base.seed + n - 1; kinds cycle through
// Ellipses, Bars, Gradient, Mixed starting from base.kind.
std::vector<GrayImage> make_corpus(int n, const PhantomSpec& base);

PhantomSpec corpus_member_spec(int index, const PhantomSpec& base);

}  // namespace xrayq
