#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "xrayq/pipeline.hpp"
#include "xrayq/resample.hpp"
#include "xrayq/synth.hpp"

using namespace xrayq;

namespace {

std::vector<NamedImage> synthetic_corpus(int n, int size, std::uint64_t seed) {
  PhantomSpec base;
  base.width = size;
  base.height = size;
  base.seed = seed;
  std::vector<NamedImage> out;
  int i = 0;
  for (GrayImage& img : make_corpus(n, base)) out.push_back({"p" + std::to_string(i++), std::move(img)});
  return out;
}

std::string without_runtime(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    if (cols.size() >= 6) cols[5] = "-";
    for (const std::string& col : cols) out += col + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(Method, ParseAndPrint) {
  for (Method m : {Method::UM, Method::CLAHE, Method::Bicubic, Method::VDSR, Method::SRCNN}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("bicubic"), Method::Bicubic);
  EXPECT_EQ(parse_method("um"), Method::UM);
  EXPECT_FALSE(parse_method("gan").has_value());
}

TEST(EnhanceImage, ZeroAmountUnsharpOnNormalImageIsIdentity) {
  GrayImage ramp(16, 16);
  for (int i = 0; i < 256; ++i) ramp.data()[i] = static_cast<std::uint8_t>(i);
  EnhanceConfig cfg;
  cfg.method = Method::UM;
  cfg.params.unsharp.amount = 0.0;
  const EnhanceResult r = enhance_image(ramp, cfg);
  EXPECT_EQ(r.exposure.exposure, ExposureClass::Normal);
  EXPECT_FALSE(r.equalized);
  EXPECT_TRUE((r.output == ramp).all());
}

TEST(EnhanceImage, DarkImageIsEqualizedFirst) {
  Rng rng(121);
  const GrayImage dark = oracle::random_gray(rng, 20, 20, 0, 60);
  EnhanceConfig cfg;
  cfg.params.unsharp.amount = 0.0;
  const EnhanceResult r = enhance_image(dark, cfg);
  EXPECT_EQ(r.exposure.exposure, ExposureClass::UnderExposed);
  EXPECT_TRUE(r.equalized);
  EXPECT_TRUE((r.output == equalize(dark)).all());
  cfg.equalize_mode = EqualizeMode::MinMax;
  EXPECT_TRUE((enhance_image(dark, cfg).output == stretch(dark)).all());
}

TEST(EnhanceImage, BicubicDoublesSize) {
  Rng rng(122);
  const GrayImage img = oracle::random_gray(rng, 12, 9);
  EnhanceConfig cfg;
  cfg.method = Method::Bicubic;
  cfg.params.factor = 2;
  const EnhanceResult r = enhance_image(img, cfg);
  EXPECT_EQ(r.output.rows(), 24);
  EXPECT_EQ(r.output.cols(), 18);
}

TEST(EnhanceImage, NeuralMethodNeedsWeights) {
  EnhanceConfig cfg;
  cfg.method = Method::SRCNN;
  EXPECT_THROW(enhance_image(GrayImage::Zero(16, 16), cfg), ConfigError);
  cfg.method = Method::VDSR;
  cfg.params.vdsr = nn::make_vdsr(nn::Init::Zero);
  cfg.params.factor = 1;
  Rng rng(123);
  GrayImage img(16, 16);
  for (int i = 0; i < 256; ++i) img.data()[i] = static_cast<std::uint8_t>(i);
  EXPECT_TRUE((enhance_image(img, cfg).output == img).all());
}

TEST(SideBySide, ConcatenatesAndPads) {
  const GrayImage a = GrayImage::Constant(4, 3, 10);
  const GrayImage b = GrayImage::Constant(6, 2, 200);
  const GrayImage s = side_by_side(a, b);
  EXPECT_EQ(s.rows(), 6);
  EXPECT_EQ(s.cols(), 5);
  EXPECT_EQ(s(0, 0), 10);
  EXPECT_EQ(s(5, 0), 0);
  EXPECT_EQ(s(5, 4), 200);
}

TEST(Bench, RowsPerImageAndMethod) {
  const auto corpus = synthetic_corpus(4, 48, 9);
  BenchConfig cfg;
  const auto rows = run_bench(corpus, cfg);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].image_id, "p0");
  EXPECT_EQ(rows[0].method, Method::Bicubic);
  EXPECT_EQ(rows[1].method, Method::UM);
  EXPECT_EQ(rows[5].method, Method::CLAHE);
  for (const BenchRow& r : rows) {
    EXPECT_TRUE(std::isfinite(r.score.psnr_db));
    EXPECT_GE(r.score.ssim, -1.0);
    EXPECT_LE(r.score.ssim, 1.0);
    EXPECT_GE(r.runtime_ms, 0.0);
  }
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0].count, 4);
}

TEST(Bench, BicubicRowMatchesDirectScore) {
  const auto corpus = synthetic_corpus(2, 48, 4);
  BenchConfig cfg;
  cfg.methods = {Method::Bicubic};
  const auto rows = run_bench(corpus, cfg);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const GrayImage& hr = corpus[i].image;
    const GrayImage up = bicubic_to_size(degrade(hr, 2, 0.0), hr.cols(), hr.rows());
    EXPECT_EQ(rows[i].score.psnr_db, psnr(hr, up));
    EXPECT_EQ(rows[i].score.ssim, ssim(hr, up));
  }
}

TEST(Bench, CsvIsDeterministicApartFromRuntime) {
  const auto corpus = synthetic_corpus(3, 48, 2);
  BenchConfig cfg;
  const std::string a = rows_to_csv(run_bench(corpus, cfg));
  const std::string b = rows_to_csv(run_bench(corpus, cfg));
  EXPECT_EQ(a.substr(0, kBenchCsvHeader.size()), kBenchCsvHeader);
  EXPECT_EQ(without_runtime(a), without_runtime(b));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 10);
}

TEST(Bench, JsonMirrorsCsv) {
  const auto corpus = synthetic_corpus(2, 48, 3);
  BenchConfig cfg;
  cfg.methods = {Method::Bicubic, Method::CLAHE};
  const auto rows = run_bench(corpus, cfg);
  const auto j = nlohmann::json::parse(rows_to_json(rows));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[1]["method"], "CLAHE");
  EXPECT_EQ(j[0]["image_id"], "p0");
  EXPECT_TRUE(j[0].contains("psnr_db"));
  EXPECT_TRUE(j[0].contains("params"));
}

TEST(Format, RealsAndInfinity) {
  EXPECT_EQ(format_real(kInfinitePsnr), "inf");
  EXPECT_EQ(format_real(1.5), "1.500000");
  BenchRow r;
  r.image_id = "x";
  r.params = "factor=2";
  const std::string csv = rows_to_csv({r});
  EXPECT_NE(csv.find("x,Bicubic,0.000000,inf,1.000000"), std::string::npos);
}

TEST(ParamsString, DescribesMethod) {
  MethodParams p;
  EXPECT_NE(params_string(Method::CLAHE, p).find("window=15"), std::string::npos);
  EXPECT_NE(params_string(Method::UM, p).find("amount="), std::string::npos);
}
