#pragma once

#include <Eigen/Dense>

namespace xrayq::nn {

// Channel-major rank-3 array. Each row of `data` is one channel plane stored
// row-major, so data(c, y * width + x) is element (c, y, x).
template <typename Scalar>
struct Tensor {
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Eigen::Index height = 0;
  Eigen::Index width = 0;
  Storage data;

  Tensor() = default;
  Tensor(Eigen::Index channels, Eigen::Index h, Eigen::Index w)
      : height(h), width(w), data(Storage::Zero(channels, h * w)) {}

  Eigen::Index channels() const { return data.rows(); }
  Eigen::Index pixels() const { return height * width; }

  Scalar& operator()(Eigen::Index c, Eigen::Index y, Eigen::Index x) { return data(c, y * width + x); }
  Scalar operator()(Eigen::Index c, Eigen::Index y, Eigen::Index x) const { return data(c, y * width + x); }

  bool same_shape(const Tensor& o) const {
    return channels() == o.channels() && height == o.height && width == o.width;
  }

  friend bool operator==(const Tensor& a, const Tensor& b) { return a.same_shape(b) && a.data == b.data; }
};

}  // namespace xrayq::nn
