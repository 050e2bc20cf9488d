#include "xrayq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "xrayq/resample.hpp"

namespace xrayq {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const nn::SrModel& require_model(Method m, const MethodParams& p) {
  const std::optional<nn::SrModel>& model = m == Method::SRCNN ? p.srcnn : p.vdsr;
  if (!model) throw ConfigError(std::string(to_string(m)) + " requires a weight file");
  return *model;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::UM: return "UM";
    case Method::CLAHE: return "CLAHE";
    case Method::Bicubic: return "Bicubic";
    case Method::VDSR: return "VDSR";
    case Method::SRCNN: return "SRCNN";
  }
  return "UM";
}

std::optional<Method> parse_method(std::string_view s) {
  if (s == "um" || s == "UM") return Method::UM;
  if (s == "clahe" || s == "CLAHE") return Method::CLAHE;
  if (s == "bicubic" || s == "Bicubic") return Method::Bicubic;
  if (s == "vdsr" || s == "VDSR") return Method::VDSR;
  if (s == "srcnn" || s == "SRCNN") return Method::SRCNN;
  return std::nullopt;
}

std::string params_string(Method m, const MethodParams& p) {
  switch (m) {
    case Method::UM:
      return "radius=" + format_real(p.unsharp.radius) + ";amount=" + format_real(p.unsharp.amount);
    case Method::CLAHE:
      return "window=" + std::to_string(p.clahe.window) + ";clip_limit=" + std::to_string(p.clahe.clip_limit) +
             ";iterations=" + std::to_string(p.clahe.iterations);
    case Method::Bicubic:
      return "factor=" + std::to_string(p.factor) + ";a=-0.5";
    case Method::VDSR:
    case Method::SRCNN:
      return "factor=" + std::to_string(p.factor) + ";arch=" + std::string(to_string(m));
  }
  return {};
}

GrayImage restore(Method m, const GrayImage& upscaled, const MethodParams& p) {
  switch (m) {
    case Method::UM: return unsharp_mask(upscaled, p.unsharp);
    case Method::CLAHE: return clahe_fast(upscaled, p.clahe);
    case Method::Bicubic: return upscaled;
    case Method::VDSR:
    case Method::SRCNN: return nn::forward_sr(require_model(m, p), upscaled);
  }
  return upscaled;
}

EnhanceResult enhance_image(const GrayImage& input, const EnhanceConfig& cfg) {
  EnhanceResult r;
  r.exposure = classify_exposure(input, cfg.threshold);
  GrayImage work = input;
  if (cfg.force_equalize || r.exposure.exposure != ExposureClass::Normal) {
    work = normalize_intensity(work, cfg.equalize_mode);
    r.equalized = true;
  }
  const auto start = Clock::now();
  switch (cfg.method) {
    case Method::UM:
    case Method::CLAHE:
      r.output = restore(cfg.method, work, cfg.params);
      break;
    case Method::Bicubic:
      r.output = bicubic_resize(work, ScaleSpec::from_factor(cfg.params.factor, work.cols(), work.rows()));
      break;
    case Method::VDSR:
    case Method::SRCNN: {
      const nn::SrModel& model = require_model(cfg.method, cfg.params);
      if (cfg.params.factor > 1) {
        work = bicubic_resize(work, ScaleSpec::from_factor(cfg.params.factor, work.cols(), work.rows()));
      }
      r.output = nn::forward_sr(model, work);
      break;
    }
  }
  r.runtime_ms = elapsed_ms(start);
  return r;
}

GrayImage side_by_side(const GrayImage& left, const GrayImage& right) {
  GrayImage out = GrayImage::Zero(std::max(left.rows(), right.rows()), left.cols() + right.cols());
  out.block(0, 0, left.rows(), left.cols()) = left;
  out.block(0, left.cols(), right.rows(), right.cols()) = right;
  return out;
}

std::vector<BenchRow> run_bench(const std::vector<NamedImage>& corpus, const BenchConfig& cfg) {
  if (corpus.empty()) throw ConfigError("bench: empty corpus");
  if (cfg.factor < 2) throw InvalidArgument("bench: factor must be >= 2");
  for (Method m : cfg.methods) {
    if (m == Method::SRCNN || m == Method::VDSR) require_model(m, cfg.params);
  }
  MethodParams params = cfg.params;
  params.factor = cfg.factor;

  std::vector<BenchRow> rows;
  rows.reserve(corpus.size() * cfg.methods.size());
  for (const NamedImage& item : corpus) {
    const GrayImage& hr = item.image;
    const GrayImage lr = degrade(hr, cfg.factor, cfg.blur_sigma);
    ScaleSpec up;
    up.factor = cfg.factor;
    up.out_width = hr.cols();
    up.out_height = hr.rows();

    const auto up_start = Clock::now();
    const GrayImage upscaled = bicubic_resize(lr, up);
    const double upscale_ms = elapsed_ms(up_start);

    for (Method m : cfg.methods) {
      const auto start = Clock::now();
      const GrayImage restored = restore(m, upscaled, params);
      const double ms = elapsed_ms(start) + upscale_ms;
      BenchRow row;
      row.image_id = item.id;
      row.method = m;
      row.score = score(hr, restored);
      row.runtime_ms = ms;
      row.params = params_string(m, params);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<MethodSummary> summarize(const std::vector<BenchRow>& rows) {
  std::vector<MethodSummary> out;
  for (const BenchRow& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const MethodSummary& s) { return s.method == row.method; });
    if (it == out.end()) {
      out.push_back({row.method, 0, 0.0, 0.0});
      it = out.end() - 1;
    }
    ++it->count;
    it->mean_psnr += row.score.psnr_db;
    it->mean_ssim += row.score.ssim;
  }
  for (MethodSummary& s : out) {
    s.mean_psnr /= s.count;
    s.mean_ssim /= s.count;
  }
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const BenchRow& r : rows) {
    out += r.image_id + ',' + std::string(to_string(r.method)) + ',' + format_real(r.score.mse) + ',' +
           format_real(r.score.psnr_db) + ',' + format_real(r.score.ssim) + ',' + format_real(r.runtime_ms) + ',' +
           r.params + '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<BenchRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BenchRow& r : rows) {
    nlohmann::ordered_json j;
    j["image_id"] = r.image_id;
    j["method"] = std::string(to_string(r.method));
    j["mse"] = r.score.mse;
    if (std::isinf(r.score.psnr_db)) {
      j["psnr_db"] = "inf";
    } else {
      j["psnr_db"] = r.score.psnr_db;
    }
    j["ssim"] = r.score.ssim;
    j["runtime_ms"] = r.runtime_ms;
    j["params"] = r.params;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace xrayq
