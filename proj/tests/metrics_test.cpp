#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "xrayq/metrics.hpp"
#include "xrayq/synth.hpp"

using namespace xrayq;

namespace {

double mse_oracle(const GrayImage& a, const GrayImage& b) {
  double s = 0.0;
  for (Eigen::Index y = 0; y < a.rows(); ++y) {
    for (Eigen::Index x = 0; x < a.cols(); ++x) {
      const double d = static_cast<double>(a(y, x)) - static_cast<double>(b(y, x));
      s += d * d;
    }
  }
  return s / static_cast<double>(a.rows() * a.cols());
}

}  // namespace

TEST(Mse, Basics) {
  Rng rng(71);
  const GrayImage a = oracle::random_gray(rng, 13, 17, 0, 254);
  EXPECT_EQ(mse(a, a), 0.0);
  const GrayImage b = (a.cast<int>() + 1).cast<std::uint8_t>();
  EXPECT_EQ(mse(a, b), 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage x = oracle::random_gray(rng, 9, 11);
    const GrayImage y = oracle::random_gray(rng, 9, 11);
    EXPECT_NEAR(mse(x, y), mse_oracle(x, y), 1e-9);
    EXPECT_EQ(mse(x, y), mse(y, x));
  }
  EXPECT_THROW(mse(a, GrayImage::Zero(13, 16)), ShapeError);
}

TEST(Psnr, Basics) {
  Rng rng(72);
  const GrayImage a = oracle::random_gray(rng, 12, 12, 0, 254);
  EXPECT_EQ(psnr(a, a), kInfinitePsnr);
  const GrayImage b = (a.cast<int>() + 1).cast<std::uint8_t>();
  EXPECT_NEAR(psnr(a, b), 20.0 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 48.1308, 1e-3);
  EXPECT_NEAR(psnr(a, b, 256), 20.0 * std::log10(256.0), 1e-12);
  const GrayImage c = (a.cast<int>() + 2).cast<std::uint8_t>();
  EXPECT_LT(psnr(a, c), psnr(a, b));
  EXPECT_THROW(psnr(a, GrayImage::Zero(11, 12)), ShapeError);
}

TEST(Ssim, IdentityAndSymmetry) {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage x = oracle::random_gray(rng, 20, 24);
    const GrayImage y = oracle::random_gray(rng, 20, 24);
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
    EXPECT_NEAR(ssim(x, y), ssim(y, x), 1e-12);
    const double s = ssim(x, y);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Ssim, ConstantImagesReduceToLuminanceTerm) {
  const GrayImage a = GrayImage::Constant(16, 16, 100);
  const GrayImage b = GrayImage::Constant(16, 16, 120);
  const double c1 = 6.5025;
  EXPECT_NEAR(ssim(a, b), (2.0 * 100 * 120 + c1) / (100.0 * 100 + 120.0 * 120 + c1), 1e-9);
}

TEST(Ssim, MatchesNaiveWindowOracle) {
  Rng rng(74);
  for (int trial = 0; trial < 8; ++trial) {
    const GrayImage x = oracle::random_gray(rng, 14 + rng.below(8), 14 + rng.below(8));
    GrayImage y = x;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y.data()[i] = static_cast<std::uint8_t>(std::clamp<int>(y.data()[i] + static_cast<int>(rng.below(41)) - 20, 0, 255));
    }
    EXPECT_NEAR(ssim(x, y), oracle::ssim(x, y), 1e-9);
  }
}

TEST(Ssim, Errors) {
  const GrayImage small = GrayImage::Zero(10, 30);
  EXPECT_THROW(ssim(small, small), InvalidArgument);
  EXPECT_THROW(ssim(GrayImage::Zero(12, 12), GrayImage::Zero(12, 13)), ShapeError);
  SsimParams p;
  p.window = 4;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Ssim, WindowIsNormalized) {
  const Eigen::VectorXd w = ssim_window_1d({});
  EXPECT_EQ(w.size(), 11);
  EXPECT_NEAR(w.sum(), 1.0, 1e-12);
  EXPECT_NEAR(w(5) / w(6), std::exp(1.0 / (2 * 1.5 * 1.5)), 1e-12);
}

TEST(Metrics, IdentitiesOverSyntheticCorpus) {
  PhantomSpec base;
  base.seed = 500;
  for (const GrayImage& img : make_corpus(12, base)) {
    const QualityScore s = score(img, img);
    EXPECT_EQ(s.mse, 0.0);
    EXPECT_EQ(s.psnr_db, kInfinitePsnr);
    EXPECT_NEAR(s.ssim, 1.0, 1e-12);
  }
}
