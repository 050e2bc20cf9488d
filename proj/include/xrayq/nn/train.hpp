#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "xrayq/image.hpp"
#include "xrayq/nn/model.hpp"
#include "xrayq/rng.hpp"

namespace xrayq::nn {

// How the per-patch squared error is reduced into the optimized objective.
//   MeanPixel: L = mean over batch and pixels of (pred - target)^2.
//   SumPixel:  L = mean over batch of the per-patch sum of (pred - target)^2 / 2,
//              the Euclidean-loss convention the published learning rates
//              were tuned for.
// The logged loss is always the per-pixel mean squared error.
enum class LossReduction { MeanPixel, SumPixel };

struct TrainConfig {
  int epochs = 1;
  int batches_per_epoch = 1;
  int patch_size = 33;
  int batch_size = 16;
  double momentum = 0.9;
  double base_lr = 1e-4;
  std::vector<double> per_layer_lr_scale;  // one entry per layer
  double lr_decay_factor = 1.0;
  int lr_decay_every = 1;                  // epochs
  std::optional<double> grad_clip;         // element-wise, symmetric
  LossReduction reduction = LossReduction::SumPixel;
  std::uint64_t seed = 0;

  // 41x41 patches, lr 0.1 divided by 10 every 10 epochs, 100 epochs, clip 0.4.
  static TrainConfig vdsr_preset();
  // lr 1e-4 for the first two layers and 1e-5 for the last, constant.
  static TrainConfig srcnn_preset();
  static TrainConfig preset(Arch arch);

  void validate(std::size_t layer_count) const;

  // base_lr * per_layer_lr_scale[layer] * decay^floor(epoch / decay_every)
  double learning_rate(std::size_t layer, int epoch) const;
};

struct LayerParams {
  Layer::Matrix weights;
  Layer::Vector biases;
};

using Gradients = std::vector<LayerParams>;

struct EpochLoss {
  int epoch = 0;
  double loss = 0.0;
};

struct TrainState {
  SrModel model;
  std::vector<LayerParams> velocities;
  int epoch = 0;
  Rng rng;
  std::vector<EpochLoss> loss_history;
};

TrainState init_train_state(SrModel model, std::uint64_t seed);

// Optional element-wise clip, then v <- momentum * v - lr * g; w <- w + v.
TrainState sgdm_step(TrainState state, const Gradients& grads, std::span<const double> lr_per_layer,
                     double momentum, std::optional<double> grad_clip);
void sgdm_step_inplace(TrainState& state, const Gradients& grads, std::span<const double> lr_per_layer,
                       double momentum, std::optional<double> grad_clip);

struct PatchPair {
  Activations input;   // bicubic-upscaled LR patch in [0, 1]
  Activations target;  // HR patch, or HR - LR for residual models
};

// `count` aligned pairs at uniformly random offsets.
std::vector<PatchPair> extract_patches(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size,
                                       Rng& rng, int count, bool residual);

// Deterministic grid of patches with the given stride.
std::vector<PatchPair> extract_patches_grid(const GrayImage& lr_upscaled, const GrayImage& hr, int patch_size,
                                            int stride, bool residual);

struct ImagePair {
  GrayImage lr_upscaled;
  GrayImage hr;
};

struct BatchResult {
  double loss = 0.0;  // per-pixel mean squared error
  Gradients grads;    // gradients of the configured objective
};

// Forward + backward over a minibatch; gradients are summed in batch order.
BatchResult batch_gradients(const SrModel& model, std::span<const PatchPair> batch, LossReduction reduction);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double lr = 0.0;  // base learning rate after decay
  double loss = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// SGD with momentum over randomly sampled patches. Deterministic for a seed.
// Throws DivergenceError on a non-finite loss.
TrainState train(SrModel model, std::span<const ImagePair> corpus, const TrainConfig& cfg,
                 const EpochCallback& on_epoch = {});

// Continues an existing state for cfg.epochs more epochs.
void train_epochs(TrainState& state, std::span<const ImagePair> corpus, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

}  // namespace xrayq::nn
