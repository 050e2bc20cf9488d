#include "xrayq/nn/model.hpp"

#include <cmath>
#include <string>

namespace xrayq::nn {

namespace {

struct LayerShape {
  Eigen::Index out, in, k;
  Activation act;
};

std::vector<LayerShape> expected_shapes(Arch arch) {
  if (arch == Arch::SRCNN) {
    return {{64, 1, 9, Activation::ReLU}, {32, 64, 1, Activation::ReLU}, {1, 32, 5, Activation::Linear}};
  }
  std::vector<LayerShape> s;
  s.push_back({64, 1, 3, Activation::ReLU});
  for (int i = 0; i < 18; ++i) s.push_back({64, 64, 3, Activation::ReLU});
  s.push_back({1, 64, 3, Activation::Linear});
  return s;
}

}  // namespace

std::string_view to_string(Arch a) { return a == Arch::SRCNN ? "srcnn" : "vdsr"; }

std::optional<Arch> parse_arch(std::string_view s) {
  if (s == "srcnn" || s == "SRCNN") return Arch::SRCNN;
  if (s == "vdsr" || s == "VDSR") return Arch::VDSR;
  return std::nullopt;
}

void SrModel::validate() const {
  const std::vector<LayerShape> shapes = expected_shapes(arch);
  const std::string name(to_string(arch));
  if (layers.size() != shapes.size()) {
    throw ValidationError(name + ": expected " + std::to_string(shapes.size()) + " layers, found " +
                          std::to_string(layers.size()));
  }
  if (residual != (arch == Arch::VDSR)) throw ValidationError(name + ": residual flag does not match architecture");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Layer& l = layers[i];
    const LayerShape& s = shapes[i];
    if (l.out_channels != s.out || l.in_channels != s.in || l.kernel_size != s.k || l.activation != s.act) {
      throw ValidationError(name + ": layer " + std::to_string(i) + " has the wrong shape or activation");
    }
    if (l.weights.rows() != s.out || l.weights.cols() != s.in * s.k * s.k || l.biases.size() != s.out) {
      throw ValidationError(name + ": layer " + std::to_string(i) + " parameter arrays are inconsistent");
    }
    if (!l.weights.allFinite() || !l.biases.allFinite()) {
      throw ValidationError(name + ": layer " + std::to_string(i) + " has non-finite parameters");
    }
  }
}

void he_uniform_init(Layer& layer, Rng& rng) {
  const double fan_in = static_cast<double>(layer.in_channels * layer.kernel_size * layer.kernel_size);
  const double bound = std::sqrt(6.0 / fan_in);
  for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = rng.uniform(-bound, bound);
  layer.biases.setZero();
}

SrModel make_model(Arch arch, Init init, Rng* rng) {
  if (init == Init::HeUniform && rng == nullptr) throw InvalidArgument("make_model: HeUniform init needs an rng");
  SrModel m;
  m.arch = arch;
  m.residual = arch == Arch::VDSR;
  for (const LayerShape& s : expected_shapes(arch)) {
    Layer l(s.out, s.in, s.k, s.act);
    if (init == Init::HeUniform) he_uniform_init(l, *rng);
    m.layers.push_back(std::move(l));
  }
  return m;
}

SrModel make_srcnn(Init init, Rng* rng) { return make_model(Arch::SRCNN, init, rng); }
SrModel make_vdsr(Init init, Rng* rng) { return make_model(Arch::VDSR, init, rng); }

std::vector<Activations> forward_trace(const std::vector<Layer>& layers, const Activations& input) {
  std::vector<Activations> trace;
  trace.reserve(layers.size() + 1);
  trace.push_back(input);
  for (const Layer& l : layers) trace.push_back(conv2d_forward(trace.back(), l));
  return trace;
}

Activations forward(const std::vector<Layer>& layers, const Activations& input) {
  Activations x = input;
  for (const Layer& l : layers) x = conv2d_forward(x, l);
  return x;
}

Activations image_to_tensor(const GrayImage& img) {
  Activations t(1, img.rows(), img.cols());
  t.data.row(0) = Eigen::Map<const Eigen::Matrix<std::uint8_t, 1, Eigen::Dynamic>>(img.data(), img.size())
                      .cast<double>() / 255.0;
  return t;
}

GrayImage tensor_to_image(const Activations& t) {
  GrayImage img(t.height, t.width);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = clamp_to_byte(255.0 * t.data(0, i));
  return img;
}

GrayImage forward_sr(const SrModel& model, const GrayImage& lr_upscaled) {
  const Activations input = image_to_tensor(lr_upscaled);
  Activations out = forward(model.layers, input);
  if (model.residual) out.data += input.data;
  return tensor_to_image(out);
}

}  // namespace xrayq::nn
