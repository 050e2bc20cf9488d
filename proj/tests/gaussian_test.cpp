#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "xrayq/gaussian.hpp"

using namespace xrayq;

TEST(GaussianKernel, LengthSumAndSymmetry) {
  for (double sigma : {0.1, 0.5, 1.0, 1.5, 2.3, 4.0}) {
    const Eigen::VectorXd k = gaussian_kernel(sigma);
    EXPECT_EQ(k.size(), 2 * static_cast<Eigen::Index>(std::ceil(3 * sigma)) + 1);
    EXPECT_NEAR(k.sum(), 1.0, 1e-12);
    for (Eigen::Index i = 0; i < k.size(); ++i) EXPECT_EQ(k(i), k(k.size() - 1 - i));
  }
}

TEST(GaussianKernel, CenterToNeighborRatioAtUnitSigma) {
  const Eigen::VectorXd k = gaussian_kernel(1.0);
  const Eigen::Index c = k.size() / 2;
  EXPECT_NEAR(k(c) / k(c + 1), std::exp(0.0) / std::exp(-0.5), 1e-12);
  EXPECT_NEAR(k(c) / k(c + 1), 1.6487212707, 1e-9);
}

TEST(GaussianKernel, RejectsNonPositiveSigma) {
  EXPECT_THROW(gaussian_kernel(0.0), InvalidArgument);
  EXPECT_THROW(gaussian_kernel(-1.0), InvalidArgument);
}

TEST(GaussianBlur, ConstantImageStaysConstant) {
  const FloatImage img = FloatImage::Constant(12, 9, 73.25);
  for (PadMode m : {PadMode::Reflect, PadMode::Replicate}) {
    const FloatImage out = gaussian_blur(img, 1.3, m);
    EXPECT_LT((out - 73.25).abs().maxCoeff(), 1e-12);
  }
}

TEST(GaussianBlur, MatchesBruteForce2D) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FloatImage img = oracle::random_float(rng, 16, 16, -10.0, 10.0);
    const double sigma = rng.uniform(0.3, 1.6);
    for (PadMode m : {PadMode::Reflect, PadMode::Replicate, PadMode::Zero}) {
      const FloatImage fast = gaussian_blur(img, sigma, m);
      const FloatImage slow = oracle::blur_2d(img, sigma, m);
      EXPECT_LT((fast - slow).abs().maxCoeff(), 1e-9) << "sigma " << sigma;
    }
  }
}

TEST(GaussianBlur, ImpulseResponseIsOuterProduct) {
  FloatImage impulse = FloatImage::Zero(9, 9);
  impulse(4, 4) = 1.0;
  const FloatImage out = gaussian_blur(impulse, 0.5, PadMode::Zero);
  const Eigen::VectorXd k = gaussian_kernel(0.5);  // length 5
  const Eigen::Index half = k.size() / 2;
  for (Eigen::Index y = 0; y < 9; ++y) {
    for (Eigen::Index x = 0; x < 9; ++x) {
      const Eigen::Index dy = y - 4 + half;
      const Eigen::Index dx = x - 4 + half;
      const bool inside = dy >= 0 && dy < k.size() && dx >= 0 && dx < k.size();
      const double expected = inside ? k(dy) * k(dx) : 0.0;
      EXPECT_NEAR(out(y, x), expected, 1e-15);
    }
  }
}

TEST(GaussianBlur, ReflectPreservesMeanApproximatelyOnSmoothInputs) {
  // Reflect padding keeps the mean of a random image within 1e-9 only when
  // the mirrored border carries the same mass as the interior; a periodic
  // symmetric input has that property exactly.
  FloatImage img(16, 16);
  for (Eigen::Index y = 0; y < 16; ++y) {
    for (Eigen::Index x = 0; x < 16; ++x) img(y, x) = 5.0;
  }
  Rng rng(5);
  const FloatImage noise = oracle::random_float(rng, 16, 16, -1.0, 1.0);
  const FloatImage out = gaussian_blur(img, 1.0, PadMode::Reflect);
  EXPECT_NEAR(out.mean(), img.mean(), 1e-9);
  const FloatImage out2 = gaussian_blur(noise, 1.0, PadMode::Reflect);
  EXPECT_NEAR(out2.mean(), noise.mean(), 0.05);
}

TEST(GaussianBlur, ReflectNeedsRoomForTheKernel) {
  const FloatImage img = FloatImage::Zero(3, 3);
  EXPECT_THROW(gaussian_blur(img, 1.0, PadMode::Reflect), InvalidArgument);
  EXPECT_NO_THROW(gaussian_blur(img, 1.0, PadMode::Replicate));
}
