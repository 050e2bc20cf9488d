#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "xrayq/cli.hpp"
#include "xrayq/exposure.hpp"
#include "xrayq/nn/weights.hpp"
#include "xrayq/pgm.hpp"

using namespace xrayq;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("xrayq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

GrayImage ramp_image() {
  GrayImage img(16, 16);
  for (int i = 0; i < 256; ++i) img.data()[i] = static_cast<std::uint8_t>(i);
  return img;
}

}  // namespace

TEST_F(CliTest, SynthWritesDeterministicFiles) {
  const Result r = run({"synth", "3", "--out", path("a"), "--seed", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Result again = run({"synth", "3", "--out", path("b"), "--seed", "20"});
  ASSERT_EQ(again.code, 0);
  for (int s = 20; s < 23; ++s) {
    const std::string name = "phantom_" + std::to_string(s) + ".pgm";
    ASSERT_TRUE(fs::exists(path("a/" + name)));
    EXPECT_EQ(read_file(path("a/" + name)), read_file(path("b/" + name)));
  }
  EXPECT_EQ(std::distance(fs::directory_iterator(path("a")), fs::directory_iterator{}), 3);
}

TEST_F(CliTest, SynthSixtySix) {
  ASSERT_EQ(run({"synth", "--synthetic", "66", "--out", path("c"), "--width", "48", "--height", "48"}).code, 0);
  EXPECT_EQ(std::distance(fs::directory_iterator(path("c")), fs::directory_iterator{}), 66);
}

TEST_F(CliTest, SynthUnwritableDirectory) {
  save_pgm(path("file"), ramp_image());
  const Result r = run({"synth", "1", "--out", path("file/sub")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, AssessClassifiesAndReportsMissingFiles) {
  ASSERT_EQ(run({"synth", "1", "--out", path("dark"), "--bias", "-1", "--seed", "4"}).code, 0);
  save_pgm(path("ramp.pgm"), ramp_image());
  const Result r = run({"assess", path("dark/phantom_4.pgm"), path("ramp.pgm"), path("missing.pgm")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("phantom_4.pgm class=Under"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ramp.pgm class=Normal lower_mass=0.500000"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("missing.pgm"), std::string::npos);

  EXPECT_EQ(run({"assess", path("missing.pgm")}).code, 2);
}

TEST_F(CliTest, EnhanceIdentityChainAndBicubic) {
  save_pgm(path("ramp.pgm"), ramp_image());
  Result r = run({"enhance", path("ramp.pgm"), "--out", path("um.pgm"), "--method", "um", "--amount", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(path("um.pgm")), read_file(path("ramp.pgm")));

  r = run({"enhance", path("ramp.pgm"), "--out", path("big.pgm"), "--method", "bicubic", "--factor", "2",
           "--side-by-side", path("sbs.pgm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const GrayImage big = load_pgm(path("big.pgm"));
  EXPECT_EQ(big.rows(), 32);
  EXPECT_EQ(big.cols(), 32);
  EXPECT_EQ(load_pgm(path("sbs.pgm")).cols(), 48);
}

TEST_F(CliTest, EnhanceReportAgainstReference) {
  save_pgm(path("ramp.pgm"), ramp_image());
  const Result r = run({"enhance", path("ramp.pgm"), "--out", path("o.pgm"), "--method", "clahe", "--window", "5",
                        "--reference", path("ramp.pgm"), "--report", path("r.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bytes = read_file(path("r.csv"));
  const std::string csv(bytes.begin(), bytes.end());
  EXPECT_EQ(csv.rfind("image_id,method,mse,psnr_db,ssim,runtime_ms,params\nramp,CLAHE,", 0), 0u) << csv;

  const Result bad = run({"enhance", path("ramp.pgm"), "--out", path("o.pgm"), "--method", "bicubic",
                          "--reference", path("ramp.pgm")});
  EXPECT_EQ(bad.code, 2);
}

TEST_F(CliTest, EnhanceNeuralNeedsWeights) {
  save_pgm(path("ramp.pgm"), ramp_image());
  const Result r = run({"enhance", path("ramp.pgm"), "--out", path("o.pgm"), "--method", "srcnn"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ConfigError"), std::string::npos);

  Rng rng(5);
  nn::save_weights_file(path("s.xsrw"), nn::make_srcnn(nn::Init::HeUniform, &rng));
  const Result ok = run({"enhance", path("ramp.pgm"), "--out", path("o.pgm"), "--method", "srcnn", "--factor", "1",
                         "--weights", path("s.xsrw")});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(load_pgm(path("o.pgm")).rows(), 16);
}

TEST_F(CliTest, EqualizeOnlyWhenSkewed) {
  save_pgm(path("ramp.pgm"), ramp_image());
  ASSERT_EQ(run({"equalize", path("ramp.pgm"), "--out", path("e.pgm")}).code, 0);
  EXPECT_EQ(read_file(path("e.pgm")), read_file(path("ramp.pgm")));
  Rng rng(6);
  const GrayImage dark = oracle::random_gray(rng, 10, 10, 0, 40);
  save_pgm(path("dark.pgm"), dark);
  const Result r = run({"equalize", path("dark.pgm"), "--out", path("d.pgm"), "--mode", "minmax"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("class=Under equalized=yes"), std::string::npos);
  EXPECT_TRUE((load_pgm(path("d.pgm")) == stretch(dark)).all());
}

TEST_F(CliTest, TrainSmokeRunIsDeterministic) {
  const std::vector<std::string> base = {"train", "--arch", "srcnn", "--synthetic", "8", "--size", "48",
                                         "--epochs", "2", "--batches-per-epoch", "2", "--batch-size", "2",
                                         "--patch-size", "21", "--seed", "3"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", path("a.xsrw")});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", path("b.xsrw")});
  const Result a = run(args_a);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("epoch=1 lr=0.0001 loss="), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("epoch=2 "), std::string::npos);
  EXPECT_EQ(a.out.find("epoch=3 "), std::string::npos);
  ASSERT_EQ(run(args_b).code, 0);
  EXPECT_NO_THROW(nn::load_weights_file(path("a.xsrw")));
  EXPECT_EQ(read_file(path("a.xsrw")), read_file(path("b.xsrw")));
}

TEST_F(CliTest, BenchCsvAndSummary) {
  const Result r = run({"bench", "--synthetic", "4", "--size", "48", "--method", "bicubic,um", "--report",
                        path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bytes = read_file(path("b.csv"));
  const std::string csv(bytes.begin(), bytes.end());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_EQ(csv.find("inf"), std::string::npos);
  EXPECT_NE(r.out.find("summary method=Bicubic n=4 mean_psnr="), std::string::npos);

  const Result j = run({"bench", "--synthetic", "2", "--size", "48", "--method", "clahe", "--format", "json"});
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(j.out.front(), '[');
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"enhance"}).code, 1);
  EXPECT_EQ(run({"bench", "--synthetic", "2", "--method", "gan"}).code, 1);
  EXPECT_EQ(run({"bench", "--synthetic", "2", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"bench"}).code, 1);  // empty corpus
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, BinaryEntryPoint) {
  const std::string cmd = std::string(XRAYQ_BINARY) + " synth 1 --out " + path("bin") + " > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(path("bin/phantom_0.pgm")));
  const std::string bad = std::string(XRAYQ_BINARY) + " nope > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 1);
}
