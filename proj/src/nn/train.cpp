#include "xrayq/nn/train.hpp"

#include <cmath>
#include <string>

namespace xrayq::nn {

TrainConfig TrainConfig::vdsr_preset() {
  TrainConfig c;
  c.epochs = 100;
  c.batches_per_epoch = 50;
  c.patch_size = 41;
  c.batch_size = 16;
  c.momentum = 0.9;
  c.base_lr = 0.1;
  c.per_layer_lr_scale.assign(20, 1.0);
  c.lr_decay_factor = 0.1;
  c.lr_decay_every = 10;
  c.grad_clip = 0.4;
  return c;
}

TrainConfig TrainConfig::srcnn_preset() {
  TrainConfig c;
  c.epochs = 100;
  c.batches_per_epoch = 50;
  c.patch_size = 33;
  c.batch_size = 16;
  c.momentum = 0.9;
  c.base_lr = 1e-4;
  c.per_layer_lr_scale = {1.0, 1.0, 0.1};
  c.lr_decay_factor = 1.0;
  c.lr_decay_every = 1;
  c.grad_clip = std::nullopt;
  return c;
}

TrainConfig TrainConfig::preset(Arch arch) { return arch == Arch::SRCNN ? srcnn_preset() : vdsr_preset(); }

void TrainConfig::validate(std::size_t layer_count) const {
  if (epochs < 1) throw InvalidArgument("train: epochs must be >= 1");
  if (batches_per_epoch < 1) throw InvalidArgument("train: batches_per_epoch must be >= 1");
  if (patch_size < 1) throw InvalidArgument("train: patch_size must be >= 1");
  if (batch_size < 1) throw InvalidArgument("train: batch_size must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("train: momentum must lie in [0, 1)");
  if (!(base_lr > 0.0)) throw InvalidArgument("train: base_lr must be positive");
  if (per_layer_lr_scale.size() != layer_count) {
    throw InvalidArgument("train: per_layer_lr_scale has " + std::to_string(per_layer_lr_scale.size()) +
                          " entries for " + std::to_string(layer_count) + " layers");
  }
  for (double s : per_layer_lr_scale) {
    if (!(s > 0.0)) throw InvalidArgument("train: per-layer lr scales must be positive");
  }
  if (!(lr_decay_factor > 0.0 && lr_decay_factor <= 1.0)) throw InvalidArgument("train: lr_decay_factor must lie in (0, 1]");
  if (lr_decay_every < 1) throw InvalidArgument("train: lr_decay_every must be >= 1");
  if (grad_clip && !(*grad_clip > 0.0)) throw InvalidArgument("train: grad_clip must be positive");
}

double TrainConfig::learning_rate(std::size_t layer, int epoch) const {
  return base_lr * per_layer_lr_scale.at(layer) * std::pow(lr_decay_factor, epoch / lr_decay_every);
}

TrainState init_train_state(SrModel model, std::uint64_t seed) {
  TrainState s;
  for (const Layer& l : model.layers) {
    s.velocities.push_back({Layer::Matrix::Zero(l.weights.rows(), l.weights.cols()), Layer::Vector::Zero(l.biases.size())});
  }
  s.model = std::move(model);
  s.rng.reseed(seed);
  return s;
}

void sgdm_step_inplace(TrainState& state, const Gradients& grads, std::span<const double> lr_per_layer,
                       double momentum, std::optional<double> grad_clip) {
  const std::size_t n = state.model.layers.size();
  if (grads.size() != n || lr_per_layer.size() != n || state.velocities.size() != n) {
    throw ShapeError("sgdm_step: gradient, learning-rate and velocity lists must match the layer count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    Layer& layer = state.model.layers[i];
    LayerParams& v = state.velocities[i];
    const LayerParams& g = grads[i];
    if (g.weights.rows() != layer.weights.rows() || g.weights.cols() != layer.weights.cols() ||
        g.biases.size() != layer.biases.size()) {
      throw ShapeError("sgdm_step: gradient shape mismatch at layer " + std::to_string(i));
    }
    const double lr = lr_per_layer[i];
    if (grad_clip) {
      const double c = *grad_clip;
      v.weights = momentum * v.weights - lr * g.weights.cwiseMax(-c).cwiseMin(c);
      v.biases = momentum * v.biases - lr * g.biases.cwiseMax(-c).cwiseMin(c);
    } else {
      v.weights = momentum * v.weights - lr * g.weights;
      v.biases = momentum * v.biases - lr * g.biases;
    }
    layer.weights += v.weights;
    layer.biases += v.biases;
  }
}

TrainState sgdm_step(TrainState state, const Gradients& grads, std::span<const double> lr_per_layer,
                     double momentum, std::optional<double> grad_clip) {
  sgdm_step_inplace(state, grads, lr_per_layer, momentum, grad_clip);
  return state;
}

namespace {

void check_pair(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size) {
  if (lr_upscaled.rows() != hr.rows() || lr_upscaled.cols() != hr.cols()) {
    throw ShapeError("patches: LR-upscaled and HR images differ in size");
  }
  if (patch_size < 1 || hr.rows() < patch_size || hr.cols() < patch_size) {
    throw InvalidArgument("patches: image " + std::to_string(hr.cols()) + "x" + std::to_string(hr.rows()) +
                          " is smaller than the " + std::to_string(patch_size) + "px patch");
  }
}

PatchPair cut_patch(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size, Eigen::Index y,
                    Eigen::Index x, bool residual) {
  PatchPair p;
  p.input = image_to_tensor(lr_upscaled.block(y, x, patch_size, patch_size));
  p.target = image_to_tensor(hr.block(y, x, patch_size, patch_size));
  if (residual) p.target.data -= p.input.data;
  return p;
}

}  // namespace

std::vector<PatchPair> extract_patches(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size,
                                       Rng& rng, int count, bool residual) {
  check_pair(lr_upscaled, hr, patch_size);
  if (count < 1) throw InvalidArgument("extract_patches: count must be >= 1");
  std::vector<PatchPair> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto max_y = static_cast<std::uint64_t>(hr.rows() - patch_size + 1);
  const auto max_x = static_cast<std::uint64_t>(hr.cols() - patch_size + 1);
  for (int i = 0; i < count; ++i) {
    const auto y = static_cast<Eigen::Index>(rng.below(max_y));
    const auto x = static_cast<Eigen::Index>(rng.below(max_x));
    out.push_back(cut_patch(lr_upscaled, hr, patch_size, y, x, residual));
  }
  return out;
}

std::vector<PatchPair> extract_patches_grid(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size,
                                            int stride, bool residual) {
  check_pair(lr_upscaled, hr, patch_size);
  if (stride < 1) throw InvalidArgument("extract_patches_grid: stride must be >= 1");
  std::vector<PatchPair> out;
  for (Eigen::Index y = 0; y + patch_size <= hr.rows(); y += stride) {
    for (Eigen::Index x = 0; x + patch_size <= hr.cols(); x += stride) {
      out.push_back(cut_patch(lr_upscaled, hr, patch_size, y, x, residual));
    }
  }
  return out;
}

BatchResult batch_gradients(const SrModel& model, std::span<const PatchPair> batch, LossReduction reduction) {
  const std::size_t n = model.layers.size();
  BatchResult r;
  for (const Layer& l : model.layers) {
    r.grads.push_back({Layer::Matrix::Zero(l.weights.rows(), l.weights.cols()), Layer::Vector::Zero(l.biases.size())});
  }
  if (batch.empty()) return r;

  double sq_sum = 0.0;
  double pixel_count = 0.0;
  const double batch_n = static_cast<double>(batch.size());
  for (const PatchPair& p : batch) {
    const std::vector<Activations> trace = forward_trace(model.layers, p.input);
    const Activations& pred = trace.back();
    if (!pred.same_shape(p.target)) throw ShapeError("batch_gradients: prediction and target shapes differ");
    const Activations::Storage diff = pred.data - p.target.data;
    sq_sum += diff.squaredNorm();
    pixel_count += static_cast<double>(diff.size());

    Activations grad;
    grad.height = pred.height;
    grad.width = pred.width;
    if (reduction == LossReduction::MeanPixel) {
      grad.data = (2.0 / (batch_n * static_cast<double>(diff.size()))) * diff;
    } else {
      grad.data = diff / batch_n;
    }
    for (std::size_t i = n; i-- > 0;) {
      ConvGrads<double> g = conv2d_backward(trace[i], trace[i + 1], model.layers[i], grad, i > 0);
      r.grads[i].weights += g.grad_weights;
      r.grads[i].biases += g.grad_biases;
      if (i > 0) grad = std::move(g.grad_input);
    }
  }
  r.loss = sq_sum / pixel_count;
  return r;
}

void train_epochs(TrainState& state, std::span<const ImagePair> corpus, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  if (corpus.empty()) throw InvalidArgument("train: empty corpus");
  cfg.validate(state.model.layers.size());
  for (const ImagePair& pair : corpus) check_pair(pair.lr_upscaled, pair.hr, cfg.patch_size);

  const std::size_t n_layers = state.model.layers.size();
  std::vector<double> lrs(n_layers);
  const int last_epoch = state.epoch + cfg.epochs;
  for (; state.epoch < last_epoch; ++state.epoch) {
    for (std::size_t i = 0; i < n_layers; ++i) lrs[i] = cfg.learning_rate(i, state.epoch);
    const double base_lr = cfg.learning_rate(0, state.epoch) / cfg.per_layer_lr_scale[0];

    double loss_sum = 0.0;
    std::vector<PatchPair> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch_size));
    for (int b = 0; b < cfg.batches_per_epoch; ++b) {
      batch.clear();
      for (int k = 0; k < cfg.batch_size; ++k) {
        const ImagePair& pair = corpus[state.rng.below(corpus.size())];
        batch.push_back(std::move(
            extract_patches(pair.lr_upscaled, pair.hr, cfg.patch_size, state.rng, 1, state.model.residual).front()));
      }
      BatchResult r = batch_gradients(state.model, batch, cfg.reduction);
      if (!std::isfinite(r.loss)) {
        throw DivergenceError(state.epoch + 1, base_lr,
                              "training diverged at epoch " + std::to_string(state.epoch + 1) +
                                  " (lr=" + std::to_string(base_lr) + ")");
      }
      loss_sum += r.loss;
      sgdm_step_inplace(state, r.grads, lrs, cfg.momentum, cfg.grad_clip);
    }
    const double epoch_loss = loss_sum / cfg.batches_per_epoch;
    state.loss_history.push_back({state.epoch + 1, epoch_loss});
    if (on_epoch) on_epoch({state.epoch + 1, base_lr, epoch_loss});
  }
}

TrainState train(SrModel model, std::span<const ImagePair> corpus, const TrainConfig& cfg,
                 const EpochCallback& on_epoch) {
  TrainState state = init_train_state(std::move(model), cfg.seed);
  train_epochs(state, corpus, cfg, on_epoch);
  return state;
}

}  // namespace xrayq::nn
