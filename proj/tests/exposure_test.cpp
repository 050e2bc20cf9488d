#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xrayq/exposure.hpp"

using namespace xrayq;

TEST(Histogram, CountsEachValue) {
  GrayImage img(2, 2);
  img << 0, 0, 255, 255;
  const Histogram h = histogram(img);
  EXPECT_EQ(h.bins(0), 2);
  EXPECT_EQ(h.bins(255), 2);
  EXPECT_EQ(h.bins.sum(), 4);
  EXPECT_EQ(h.total, 4);

  const Histogram c = histogram(GrayImage::Constant(4, 4, 128));
  EXPECT_EQ(c.bins(128), 16);
  EXPECT_EQ(c.bins.sum(), 16);
}

TEST(Histogram, RandomImagesMatchPixelCount) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const GrayImage img = oracle::random_gray(rng, 1 + rng.below(30), 1 + rng.below(30));
    const Histogram h = histogram(img);
    EXPECT_EQ(h.total, img.size());
    EXPECT_EQ(h.bins.sum(), h.total);
    for (int v = 0; v < 256; ++v) EXPECT_EQ(h.bins(v), (img == static_cast<std::uint8_t>(v)).count());
  }
}

TEST(ClassifyExposure, SpecExamples) {
  const ExposureReport under = classify_exposure(GrayImage::Constant(8, 8, 10), 0.75);
  EXPECT_EQ(under.exposure, ExposureClass::UnderExposed);
  EXPECT_EQ(under.lower_mass, 1.0);

  const ExposureReport over = classify_exposure(GrayImage::Constant(8, 8, 200), 0.75);
  EXPECT_EQ(over.exposure, ExposureClass::OverExposed);
  EXPECT_EQ(over.upper_mass, 1.0);

  GrayImage ramp(16, 16);
  for (int i = 0; i < 256; ++i) ramp.data()[i] = static_cast<std::uint8_t>(i);
  const ExposureReport normal = classify_exposure(ramp, 0.75);
  EXPECT_EQ(normal.exposure, ExposureClass::Normal);
  EXPECT_EQ(normal.lower_mass, 0.5);
}

TEST(ClassifyExposure, TieAtThresholdIsSkewed) {
  GrayImage img(1, 4);
  img << 0, 0, 0, 255;
  EXPECT_EQ(classify_exposure(img, 0.75).exposure, ExposureClass::UnderExposed);
  img << 255, 255, 255, 0;
  EXPECT_EQ(classify_exposure(img, 0.75).exposure, ExposureClass::OverExposed);
  img << 0, 0, 255, 255;
  EXPECT_EQ(classify_exposure(img, 1.0).exposure, ExposureClass::Normal);
}

TEST(ClassifyExposure, MassesSumToOne) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = oracle::random_gray(rng, 9, 13, 0, static_cast<int>(rng.below(256)));
    const ExposureReport r = classify_exposure(img);
    EXPECT_NEAR(r.lower_mass + r.upper_mass, 1.0, 1e-12);
    EXPECT_EQ(r.lower_mass, static_cast<double>((img <= 127).count()) / img.size());
  }
}

TEST(ClassifyExposure, RejectsThresholdOutOfRange) {
  const GrayImage img = GrayImage::Zero(2, 2);
  EXPECT_THROW(classify_exposure(img, 0.5), InvalidArgument);
  EXPECT_THROW(classify_exposure(img, 1.01), InvalidArgument);
  EXPECT_NO_THROW(classify_exposure(img, 1.0));
}

TEST(Equalize, HalfBlackHalfWhite) {
  GrayImage img(2, 2);
  img << 0, 0, 255, 255;
  const GrayImage out = equalize(img);
  EXPECT_EQ(out(0, 0), 128);
  EXPECT_EQ(out(1, 1), 255);
}

TEST(Equalize, ConstantMapsTo255) {
  const GrayImage out = equalize(GrayImage::Constant(5, 3, 42));
  EXPECT_TRUE((out == 255).all());
}

TEST(Equalize, MatchesCdfOracleAndIsMonotone) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = oracle::random_gray(rng, 17, 11, 30, 90);
    const GrayImage out = equalize(img);
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      const std::int64_t below = (img <= img.data()[i]).count();
      EXPECT_EQ(out.data()[i], oracle::round_ratio(255 * below, img.size()));
      for (Eigen::Index j = 0; j < img.size(); j += 7) {
        if (img.data()[i] <= img.data()[j]) EXPECT_LE(out.data()[i], out.data()[j]);
      }
    }
  }
}

TEST(Stretch, MapsRangeToFullScale) {
  GrayImage img(1, 3);
  img << 50, 100, 150;
  const GrayImage out = stretch(img);
  EXPECT_EQ(out(0, 0), 0);
  EXPECT_EQ(out(0, 1), 128);  // 127.5 rounds away from zero
  EXPECT_EQ(out(0, 2), 255);
  const GrayImage flat = GrayImage::Constant(3, 3, 77);
  EXPECT_TRUE((stretch(flat) == flat).all());
}

TEST(NormalizeIntensity, DispatchesOnMode) {
  Rng rng(9);
  const GrayImage img = oracle::random_gray(rng, 8, 8, 10, 60);
  EXPECT_TRUE((normalize_intensity(img, EqualizeMode::HistEq) == equalize(img)).all());
  EXPECT_TRUE((normalize_intensity(img, EqualizeMode::MinMax) == stretch(img)).all());
}
