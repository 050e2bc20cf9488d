#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <string>

#include "xrayq/errors.hpp"
#include "xrayq/nn/tensor.hpp"

namespace xrayq::nn {

enum class Activation : std::uint8_t { Linear = 0, ReLU = 1 };

// Square "same" convolution with zero padding of (k-1)/2.
//
// weights(o, (c * k + i) * k + j) holds w[o][c][i][j]; this is the flattened
// out x in x k x k layout, so weights.data() is the serialized order too.
template <typename Scalar>
struct ConvLayer {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index out_channels = 0;
  Eigen::Index in_channels = 0;
  Eigen::Index kernel_size = 0;
  Matrix weights;
  Vector biases;
  Activation activation = Activation::Linear;

  ConvLayer() = default;
  ConvLayer(Eigen::Index out, Eigen::Index in, Eigen::Index k, Activation act)
      : out_channels(out), in_channels(in), kernel_size(k), weights(Matrix::Zero(out, in * k * k)),
        biases(Vector::Zero(out)), activation(act) {}

  Eigen::Index padding() const { return (kernel_size - 1) / 2; }

  Scalar& w(Eigen::Index o, Eigen::Index c, Eigen::Index i, Eigen::Index j) {
    return weights(o, (c * kernel_size + i) * kernel_size + j);
  }
  Scalar w(Eigen::Index o, Eigen::Index c, Eigen::Index i, Eigen::Index j) const {
    return weights(o, (c * kernel_size + i) * kernel_size + j);
  }

  friend bool operator==(const ConvLayer& a, const ConvLayer& b) {
    return a.out_channels == b.out_channels && a.in_channels == b.in_channels &&
           a.kernel_size == b.kernel_size && a.activation == b.activation && a.weights == b.weights &&
           a.biases == b.biases;
  }
};

template <typename Scalar>
struct ConvGrads {
  Tensor<Scalar> grad_input;  // empty when not requested
  typename ConvLayer<Scalar>::Matrix grad_weights;
  typename ConvLayer<Scalar>::Vector grad_biases;
};

// Unfolds every k x k zero-padded neighborhood into a column:
// result(c*k*k + i*k + j, y*W + x) = in(c, y+i-p, x+j-p).
template <typename Scalar>
typename Tensor<Scalar>::Storage im2col(const Tensor<Scalar>& in, Eigen::Index k) {
  const Eigen::Index p = (k - 1) / 2;
  const Eigen::Index h = in.height;
  const Eigen::Index w = in.width;
  typename Tensor<Scalar>::Storage cols = Tensor<Scalar>::Storage::Zero(in.channels() * k * k, h * w);
  for (Eigen::Index c = 0; c < in.channels(); ++c) {
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index row = (c * k + i) * k + j;
        const Eigen::Index dx = j - p;
        const Eigen::Index x_lo = std::max<Eigen::Index>(0, -dx);
        const Eigen::Index x_hi = std::min<Eigen::Index>(w, w - dx);
        if (x_hi <= x_lo) continue;
        for (Eigen::Index y = 0; y < h; ++y) {
          const Eigen::Index sy = y + i - p;
          if (sy < 0 || sy >= h) continue;
          cols.row(row).segment(y * w + x_lo, x_hi - x_lo) = in.data.row(c).segment(sy * w + x_lo + dx, x_hi - x_lo);
        }
      }
    }
  }
  return cols;
}

// Adjoint of im2col: scatters column gradients back onto the input grid.
template <typename Scalar>
Tensor<Scalar> col2im(const typename Tensor<Scalar>::Storage& cols, Eigen::Index channels, Eigen::Index h,
                      Eigen::Index w, Eigen::Index k) {
  const Eigen::Index p = (k - 1) / 2;
  Tensor<Scalar> out(channels, h, w);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index row = (c * k + i) * k + j;
        const Eigen::Index dx = j - p;
        const Eigen::Index x_lo = std::max<Eigen::Index>(0, -dx);
        const Eigen::Index x_hi = std::min<Eigen::Index>(w, w - dx);
        if (x_hi <= x_lo) continue;
        for (Eigen::Index y = 0; y < h; ++y) {
          const Eigen::Index sy = y + i - p;
          if (sy < 0 || sy >= h) continue;
          out.data.row(c).segment(sy * w + x_lo + dx, x_hi - x_lo) += cols.row(row).segment(y * w + x_lo, x_hi - x_lo);
        }
      }
    }
  }
  return out;
}

namespace detail {

template <typename Scalar>
void check_input(const Tensor<Scalar>& input, const ConvLayer<Scalar>& layer) {
  if (input.channels() != layer.in_channels) {
    throw ShapeError("conv2d: input has " + std::to_string(input.channels()) + " channels, layer expects " +
                     std::to_string(layer.in_channels));
  }
}

// Pre-activation W * cols + b for the layer.
template <typename Scalar>
typename Tensor<Scalar>::Storage linear_response(const Tensor<Scalar>& input, const ConvLayer<Scalar>& layer) {
  typename Tensor<Scalar>::Storage pre;
  if (layer.kernel_size == 1) {
    pre.noalias() = layer.weights * input.data;
  } else {
    pre.noalias() = layer.weights * im2col(input, layer.kernel_size);
  }
  pre.colwise() += layer.biases;
  return pre;
}

}  // namespace detail

template <typename Scalar>
Tensor<Scalar> conv2d_forward(const Tensor<Scalar>& input, const ConvLayer<Scalar>& layer) {
  detail::check_input(input, layer);
  Tensor<Scalar> out;
  out.height = input.height;
  out.width = input.width;
  out.data = detail::linear_response(input, layer);
  if (layer.activation == Activation::ReLU) out.data = out.data.cwiseMax(Scalar(0));
  return out;
}

// Gradients of the layer given the forward output it produced. ReLU'(0) = 0,
// which is the same as masking on output > 0.
template <typename Scalar>
ConvGrads<Scalar> conv2d_backward(const Tensor<Scalar>& input, const Tensor<Scalar>& output,
                                  const ConvLayer<Scalar>& layer, const Tensor<Scalar>& grad_out,
                                  bool want_input_grad = true) {
  detail::check_input(input, layer);
  if (grad_out.channels() != layer.out_channels || grad_out.height != input.height ||
      grad_out.width != input.width || !output.same_shape(grad_out)) {
    throw ShapeError("conv2d_backward: gradient shape does not match the layer output");
  }
  using Storage = typename Tensor<Scalar>::Storage;
  Storage g;
  if (layer.activation == Activation::ReLU) {
    g = (output.data.array() > Scalar(0)).select(grad_out.data, Scalar(0));
  } else {
    g = grad_out.data;
  }

  ConvGrads<Scalar> grads;
  grads.grad_biases = g.rowwise().sum();
  if (layer.kernel_size == 1) {
    grads.grad_weights.noalias() = g * input.data.transpose();
    if (want_input_grad) {
      grads.grad_input.height = input.height;
      grads.grad_input.width = input.width;
      grads.grad_input.data.noalias() = layer.weights.transpose() * g;
    }
  } else {
    const Storage cols = im2col(input, layer.kernel_size);
    grads.grad_weights.noalias() = g * cols.transpose();
    if (want_input_grad) {
      // The input gradient is a same-size convolution of g with the kernel
      // flipped in space and transposed in channels.
      const Eigen::Index k = layer.kernel_size;
      typename ConvLayer<Scalar>::Matrix flipped(layer.in_channels, layer.out_channels * k * k);
      for (Eigen::Index o = 0; o < layer.out_channels; ++o) {
        for (Eigen::Index c = 0; c < layer.in_channels; ++c) {
          for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j < k; ++j) flipped(c, (o * k + i) * k + j) = layer.w(o, c, k - 1 - i, k - 1 - j);
          }
        }
      }
      Tensor<Scalar> g_t;
      g_t.height = input.height;
      g_t.width = input.width;
      g_t.data = std::move(g);
      grads.grad_input.height = input.height;
      grads.grad_input.width = input.width;
      grads.grad_input.data.noalias() = flipped * im2col(g_t, k);
    }
  }
  return grads;
}

// Convenience overload that recomputes the forward output.
template <typename Scalar>
ConvGrads<Scalar> conv2d_backward(const Tensor<Scalar>& input, const ConvLayer<Scalar>& layer,
                                  const Tensor<Scalar>& grad_out) {
  return conv2d_backward(input, conv2d_forward(input, layer), layer, grad_out, true);
}

}  // namespace xrayq::nn
