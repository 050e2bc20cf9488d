#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xrayq/enhance.hpp"
#include "xrayq/exposure.hpp"
#include "xrayq/metrics.hpp"
#include "xrayq/nn/model.hpp"

namespace xrayq {

enum class Method { UM, CLAHE, Bicubic, VDSR, SRCNN };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);  // um, clahe, bicubic, vdsr, srcnn

struct MethodParams {
  ClaheParams clahe = ClaheParams::for_window(15);
  UnsharpParams unsharp;
  int factor = 2;
  std::optional<nn::SrModel> srcnn;
  std::optional<nn::SrModel> vdsr;
};

// Canonical "key=value;key=value" description of the parameters a method used.
std::string params_string(Method m, const MethodParams& p);

// Restoration step applied to an image that is already at the target size
// (Bicubic is the identity here: the upscale itself is the method).
GrayImage restore(Method m, const GrayImage& upscaled, const MethodParams& p);

struct EnhanceConfig {
  double threshold = kDefaultExposureThreshold;
  EqualizeMode equalize_mode = EqualizeMode::HistEq;
  bool force_equalize = false;
  Method method = Method::UM;
  MethodParams params;
};

struct EnhanceResult {
  GrayImage output;
  ExposureReport exposure;
  bool equalized = false;
  double runtime_ms = 0.0;
};

// classify -> equalize unless Normal -> method. Bicubic scales by
// params.factor; the neural methods upscale by params.factor first when it
// is greater than 1.
EnhanceResult enhance_image(const GrayImage& input, const EnhanceConfig& cfg);

// Horizontal (left | right) concatenation; the shorter image is padded with black.
GrayImage side_by_side(const GrayImage& left, const GrayImage& right);

struct BenchRow {
  std::string image_id;
  Method method = Method::Bicubic;
  QualityScore score;
  double runtime_ms = 0.0;
  std::string params;
};

struct BenchConfig {
  int factor = 2;
  double blur_sigma = 0.0;
  std::vector<Method> methods = {Method::Bicubic, Method::UM, Method::CLAHE};
  MethodParams params;
};

struct NamedImage {
  std::string id;
  GrayImage image;
};

// For every HR image: degrade, bicubic-upscale back to the HR size, apply each
// method and score against the HR image. Rows follow corpus order, then
// method order.
std::vector<BenchRow> run_bench(const std::vector<NamedImage>& corpus, const BenchConfig& cfg);

struct MethodSummary {
  Method method = Method::Bicubic;
  int count = 0;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
};

std::vector<MethodSummary> summarize(const std::vector<BenchRow>& rows);

inline constexpr std::string_view kBenchCsvHeader = "image_id,method,mse,psnr_db,ssim,runtime_ms,params";

std::string format_real(double v);  // "%.6f", "inf" for +infinity
std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string rows_to_json(const std::vector<BenchRow>& rows);

}  // namespace xrayq
