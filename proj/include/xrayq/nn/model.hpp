#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "xrayq/image.hpp"
#include "xrayq/nn/conv.hpp"
#include "xrayq/rng.hpp"

namespace xrayq::nn {

using Layer = ConvLayer<double>;
using Activations = Tensor<double>;

enum class Arch : std::uint8_t { SRCNN = 0, VDSR = 1 };

std::string_view to_string(Arch a);
std::optional<Arch> parse_arch(std::string_view s);

// SRCNN: 1->64 (9x9, ReLU), 64->32 (1x1, ReLU), 32->1 (5x5, Linear).
// VDSR:  1->64, 18 x 64->64, 64->1, all 3x3, ReLU except the last; residual.
struct SrModel {
  Arch arch = Arch::SRCNN;
  std::vector<Layer> layers;
  bool residual = false;

  // Throws ValidationError when the layers do not match the architecture.
  void validate() const;

  friend bool operator==(const SrModel&, const SrModel&) = default;
};

enum class Init { Zero, HeUniform };

// Zero biases; HeUniform draws weights from U(-b, b) with b = sqrt(6 / fan_in),
// i.e. standard deviation sqrt(2 / fan_in).
SrModel make_srcnn(Init init, Rng* rng = nullptr);
SrModel make_vdsr(Init init, Rng* rng = nullptr);
SrModel make_model(Arch arch, Init init, Rng* rng = nullptr);

void he_uniform_init(Layer& layer, Rng& rng);

// Forward pass keeping every intermediate: result[0] is the input,
// result[i + 1] the output of layer i.
std::vector<Activations> forward_trace(const std::vector<Layer>& layers, const Activations& input);
Activations forward(const std::vector<Layer>& layers, const Activations& input);

Activations image_to_tensor(const GrayImage& img);  // scaled to [0, 1]
GrayImage tensor_to_image(const Activations& t);      // x255, rounded, clamped

// Runs the model on a bicubic-upscaled image; residual models add their
// output to the input before rescaling.
GrayImage forward_sr(const SrModel& model, const GrayImage& lr_upscaled);

}  // namespace xrayq::nn
