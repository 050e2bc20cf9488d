#include "xrayq/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "xrayq/exposure.hpp"
#include "xrayq/nn/train.hpp"
#include "xrayq/nn/weights.hpp"
#include "xrayq/pgm.hpp"
#include "xrayq/pipeline.hpp"
#include "xrayq/resample.hpp"
#include "xrayq/synth.hpp"

namespace xrayq::cli {

namespace fs = std::filesystem;

namespace {

struct CorpusFlags {
  int synthetic = 0;
  std::string dir;
  int size = 96;
  std::uint64_t seed = 0;
};

struct MethodFlags {
  int window = 15;
  std::optional<int> clip_limit;
  int iterations = 1;
  double radius = 1.0;
  double amount = 1.0;
  int factor = 2;
};

std::string fixed6(double v) { return format_real(v); }

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
  cmd->add_option("--window", f.window, "CLAHE window side (odd, >= 3)")->capture_default_str();
  cmd->add_option("--clip-limit", f.clip_limit, "CLAHE clip limit in counts (default: 1% of window area)");
  cmd->add_option("--iterations", f.iterations, "CLAHE clipping iterations")->capture_default_str();
  cmd->add_option("--radius", f.radius, "unsharp mask Gaussian sigma")->capture_default_str();
  cmd->add_option("--amount", f.amount, "unsharp mask gain")->capture_default_str();
  cmd->add_option("--factor", f.factor, "scale factor")->capture_default_str();
}

void add_corpus_flags(CLI::App* cmd, CorpusFlags& f) {
  cmd->add_option("--synthetic", f.synthetic, "use N generated phantoms");
  cmd->add_option("--corpus", f.dir, "directory of .pgm images");
  cmd->add_option("--size", f.size, "phantom side length for --synthetic")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed")->capture_default_str();
}

MethodParams method_params(const MethodFlags& f) {
  MethodParams p;
  p.clahe = ClaheParams::for_window(f.window);
  if (f.clip_limit) p.clahe.clip_limit = *f.clip_limit;
  p.clahe.iterations = f.iterations;
  p.clahe.validate();
  p.unsharp.radius = f.radius;
  p.unsharp.amount = f.amount;
  p.unsharp.validate();
  if (f.factor < 1) throw ConfigError("--factor must be >= 1");
  p.factor = f.factor;
  return p;
}

void attach_weights(MethodParams& p, const std::vector<std::string>& paths) {
  for (const std::string& path : paths) {
    nn::SrModel m = nn::load_weights_file(path);
    if (m.arch == nn::Arch::SRCNN) {
      p.srcnn = std::move(m);
    } else {
      p.vdsr = std::move(m);
    }
  }
}

std::vector<NamedImage> load_corpus(const CorpusFlags& f) {
  if (f.synthetic > 0 && !f.dir.empty()) throw ConfigError("use either --synthetic or --corpus, not both");
  std::vector<NamedImage> corpus;
  if (f.synthetic > 0) {
    PhantomSpec base;
    base.width = f.size;
    base.height = f.size;
    base.seed = f.seed;
    for (int i = 0; i < f.synthetic; ++i) {
      const PhantomSpec s = corpus_member_spec(i, base);
      corpus.push_back({"phantom_" + std::to_string(s.seed), generate(s)});
    }
  } else if (!f.dir.empty()) {
    if (!fs::is_directory(f.dir)) throw ConfigError("corpus directory not found: " + f.dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(f.dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) corpus.push_back({p.stem().string(), load_pgm(p)});
  }
  if (corpus.empty()) throw ConfigError("empty corpus (give --synthetic N or a --corpus directory with .pgm files)");
  return corpus;
}

std::vector<nn::ImagePair> training_pairs(const std::vector<NamedImage>& corpus, int factor) {
  std::vector<nn::ImagePair> pairs;
  for (const NamedImage& item : corpus) {
    const GrayImage lr = degrade(item.image, factor, 0.0);
    ScaleSpec up;
    up.factor = factor;
    up.out_width = item.image.cols();
    up.out_height = item.image.rows();
    pairs.push_back({bicubic_resize(lr, up), item.image});
  }
  return pairs;
}

void write_report(const std::string& path, const std::string& format, const std::vector<BenchRow>& rows,
                  std::ostream& out) {
  const std::string text = format == "json" ? rows_to_json(rows) : rows_to_csv(rows);
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
}

int cmd_assess(const std::vector<std::string>& inputs, double threshold, std::ostream& out, std::ostream& err) {
  if (!(threshold > 0.5 && threshold <= 1.0)) throw ConfigError("--threshold must lie in (0.5, 1]");
  int failures = 0;
  for (const std::string& path : inputs) {
    try {
      const ExposureReport r = classify_exposure(load_pgm(path), threshold);
      out << path << " class=" << to_string(r.exposure) << " lower_mass=" << fixed6(r.lower_mass) << '\n';
    } catch (const std::exception& e) {
      ++failures;
      err << path << " error=" << e.what() << '\n';
    }
  }
  return failures == static_cast<int>(inputs.size()) ? kExitProcessing : kExitOk;
}

struct EqualizeFlags {
  std::string input;
  std::string out;
  std::string mode = "hist";
  double threshold = kDefaultExposureThreshold;
  bool force = false;
};

EqualizeMode parse_equalize_mode(const std::string& s) {
  if (s == "hist") return EqualizeMode::HistEq;
  if (s == "minmax") return EqualizeMode::MinMax;
  throw ConfigError("unknown equalize mode '" + s + "' (hist or minmax)");
}

int cmd_equalize(const EqualizeFlags& f, std::ostream& out) {
  const GrayImage img = load_pgm(f.input);
  const ExposureReport r = classify_exposure(img, f.threshold);
  const bool apply = f.force || r.exposure != ExposureClass::Normal;
  const GrayImage result = apply ? normalize_intensity(img, parse_equalize_mode(f.mode)) : img;
  save_pgm(f.out, result);
  out << f.input << " class=" << to_string(r.exposure) << " equalized=" << (apply ? "yes" : "no")
      << " out=" << f.out << '\n';
  return kExitOk;
}

struct EnhanceFlags {
  std::string input;
  std::string out;
  std::string method = "um";
  MethodFlags params;
  std::vector<std::string> weights;
  std::string reference;
  std::string side_by_side;
  std::string report;
  std::string format = "csv";
  std::string equalize_mode = "hist";
  double threshold = kDefaultExposureThreshold;
  bool force_equalize = false;
};

int cmd_enhance(const EnhanceFlags& f, std::ostream& out) {
  const std::optional<Method> method = parse_method(f.method);
  if (!method) throw ConfigError("unknown method '" + f.method + "'");
  EnhanceConfig cfg;
  cfg.method = *method;
  cfg.threshold = f.threshold;
  cfg.force_equalize = f.force_equalize;
  cfg.equalize_mode = parse_equalize_mode(f.equalize_mode);
  cfg.params = method_params(f.params);
  if ((*method == Method::SRCNN || *method == Method::VDSR)) {
    if (f.weights.empty()) throw ConfigError(std::string(to_string(*method)) + " requires --weights");
    attach_weights(cfg.params, f.weights);
    if ((*method == Method::SRCNN && !cfg.params.srcnn) || (*method == Method::VDSR && !cfg.params.vdsr)) {
      throw ConfigError("--weights does not contain a " + std::string(to_string(*method)) + " model");
    }
  }

  const GrayImage input = load_pgm(f.input);
  const EnhanceResult r = enhance_image(input, cfg);
  save_pgm(f.out, r.output);
  if (!f.side_by_side.empty()) save_pgm(f.side_by_side, side_by_side(input, r.output));
  out << f.input << " class=" << to_string(r.exposure.exposure) << " equalized=" << (r.equalized ? "yes" : "no")
      << " method=" << to_string(*method) << " out=" << f.out << '\n';

  if (!f.reference.empty()) {
    const GrayImage ref = load_pgm(f.reference);
    BenchRow row;
    row.image_id = fs::path(f.input).stem().string();
    row.method = *method;
    row.score = score(ref, r.output);
    row.runtime_ms = r.runtime_ms;
    row.params = params_string(*method, cfg.params);
    write_report(f.report, f.format, {row}, out);
  }
  return kExitOk;
}

struct TrainFlags {
  std::string arch = "srcnn";
  CorpusFlags corpus;
  std::optional<int> epochs;
  std::optional<int> batches;
  std::optional<int> batch_size;
  std::optional<int> patch_size;
  std::optional<double> lr;
  int factor = 2;
  std::string out;
};

int cmd_train(const TrainFlags& f, std::ostream& out) {
  const std::optional<nn::Arch> arch = nn::parse_arch(f.arch);
  if (!arch) throw ConfigError("unknown --arch '" + f.arch + "' (srcnn or vdsr)");
  if (f.factor < 2) throw ConfigError("--factor must be >= 2");
  nn::TrainConfig cfg = nn::TrainConfig::preset(*arch);
  cfg.seed = f.corpus.seed;
  if (f.epochs) cfg.epochs = *f.epochs;
  if (f.batches) cfg.batches_per_epoch = *f.batches;
  if (f.batch_size) cfg.batch_size = *f.batch_size;
  if (f.patch_size) cfg.patch_size = *f.patch_size;
  if (f.lr) cfg.base_lr = *f.lr;
  try {
    cfg.validate(*arch == nn::Arch::SRCNN ? 3 : 20);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  const std::vector<nn::ImagePair> pairs = training_pairs(load_corpus(f.corpus), f.factor);
  Rng init_rng(cfg.seed);
  nn::SrModel model = nn::make_model(*arch, nn::Init::HeUniform, &init_rng);
  const nn::TrainState state = nn::train(std::move(model), pairs, cfg, [&out](const nn::EpochRecord& rec) {
    char line[128];
    std::snprintf(line, sizeof line, "epoch=%d lr=%.6g loss=%.8f", rec.epoch, rec.lr, rec.loss);
    out << line << '\n' << std::flush;
  });
  nn::save_weights_file(f.out, state.model);
  out << "weights=" << f.out << '\n';
  return kExitOk;
}

struct BenchFlags {
  CorpusFlags corpus{0, "", 96, 1000};
  std::vector<std::string> methods = {"bicubic", "um", "clahe"};
  MethodFlags params;
  std::vector<std::string> weights;
  std::string report;
  std::string format = "csv";
  double blur = 0.0;
};

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  BenchConfig cfg;
  cfg.methods.clear();
  for (const std::string& name : f.methods) {
    const std::optional<Method> m = parse_method(name);
    if (!m) throw ConfigError("unknown method '" + name + "'");
    cfg.methods.push_back(*m);
  }
  cfg.params = method_params(f.params);
  if (f.params.factor < 2) throw ConfigError("bench: --factor must be >= 2");
  cfg.factor = f.params.factor;
  cfg.blur_sigma = f.blur;
  attach_weights(cfg.params, f.weights);

  const std::vector<BenchRow> rows = run_bench(load_corpus(f.corpus), cfg);
  write_report(f.report, f.format, rows, out);
  for (const MethodSummary& s : summarize(rows)) {
    out << "summary method=" << to_string(s.method) << " n=" << s.count << " mean_psnr=" << fixed6(s.mean_psnr)
        << " mean_ssim=" << fixed6(s.mean_ssim) << '\n';
  }
  return kExitOk;
}

struct SynthFlags {
  int n = 1;
  std::string out = ".";
  PhantomSpec spec;
  std::string kind = "mixed";
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  if (f.n < 1) throw ConfigError("synth: N must be >= 1");
  const std::optional<PhantomKind> kind = parse_phantom_kind(f.kind);
  if (!kind) throw ConfigError("unknown --kind '" + f.kind + "'");
  PhantomSpec base = f.spec;
  base.kind = *kind;
  try {
    base.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  std::error_code ec;
  fs::create_directories(f.out, ec);
  if (ec || !fs::is_directory(f.out)) throw IoError("cannot create output directory " + f.out);
  for (int i = 0; i < f.n; ++i) {
    const PhantomSpec s = corpus_member_spec(i, base);
    const fs::path path = fs::path(f.out) / ("phantom_" + std::to_string(s.seed) + ".pgm");
    save_pgm(path, generate(s));
    out << path.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"xrayq - X-ray scan exposure correction, enhancement and super-resolution"};
  app.name("xrayq");
  app.require_subcommand(1);

  std::vector<std::string> assess_inputs;
  double assess_threshold = kDefaultExposureThreshold;
  CLI::App* assess = app.add_subcommand("assess", "classify exposure of PGM images");
  assess->add_option("inputs", assess_inputs, "input .pgm files")->required();
  assess->add_option("--threshold", assess_threshold, "dominance threshold in (0.5, 1]")->capture_default_str();

  EqualizeFlags eq;
  CLI::App* equalize_cmd = app.add_subcommand("equalize", "equalize an image if it is under- or over-exposed");
  equalize_cmd->add_option("input", eq.input, "input .pgm")->required();
  equalize_cmd->add_option("--out", eq.out, "output .pgm")->required();
  equalize_cmd->add_option("--mode", eq.mode, "hist or minmax")->capture_default_str();
  equalize_cmd->add_option("--threshold", eq.threshold, "dominance threshold")->capture_default_str();
  equalize_cmd->add_flag("--force-equalize", eq.force, "equalize even when exposure is normal");

  EnhanceFlags en;
  CLI::App* enhance = app.add_subcommand("enhance", "run the correction pipeline and one enhancement method");
  enhance->add_option("input", en.input, "input .pgm")->required();
  enhance->add_option("--out", en.out, "output .pgm")->required();
  enhance->add_option("--method", en.method, "um, clahe, bicubic, vdsr or srcnn")->capture_default_str();
  add_method_flags(enhance, en.params);
  enhance->add_option("--weights", en.weights, "weight file(s) for vdsr/srcnn");
  enhance->add_option("--reference", en.reference, "reference .pgm; enables metrics");
  enhance->add_option("--side-by-side", en.side_by_side, "also write an (input | output) comparison .pgm");
  enhance->add_option("--report", en.report, "write the metrics row here instead of stdout");
  enhance->add_option("--format", en.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  enhance->add_option("--threshold", en.threshold, "exposure dominance threshold")->capture_default_str();
  enhance->add_option("--equalize-mode", en.equalize_mode, "hist or minmax")->capture_default_str();
  enhance->add_flag("--force-equalize", en.force_equalize, "equalize even when exposure is normal");

  TrainFlags tr;
  CLI::App* train = app.add_subcommand("train", "train an SRCNN or VDSR model");
  train->add_option("--arch", tr.arch, "srcnn or vdsr")->capture_default_str();
  add_corpus_flags(train, tr.corpus);
  train->add_option("--epochs", tr.epochs, "epochs (preset: 100)");
  train->add_option("--batches-per-epoch", tr.batches, "minibatches per epoch (preset: 50)");
  train->add_option("--batch-size", tr.batch_size, "patches per minibatch (preset: 16)");
  train->add_option("--patch-size", tr.patch_size, "patch side (preset: 33 srcnn, 41 vdsr)");
  train->add_option("--lr", tr.lr, "base learning rate (preset: 1e-4 srcnn, 0.1 vdsr)");
  train->add_option("--factor", tr.factor, "degradation factor for training pairs")->capture_default_str();
  train->add_option("--out,--weights", tr.out, "output weight file")->required();

  BenchFlags be;
  CLI::App* bench = app.add_subcommand("bench", "degrade-then-restore benchmark");
  add_corpus_flags(bench, be.corpus);
  bench->add_option("--method", be.methods, "methods, comma separated")->delimiter(',')->capture_default_str();
  add_method_flags(bench, be.params);
  bench->add_option("--weights", be.weights, "weight file(s) for vdsr/srcnn");
  bench->add_option("--report", be.report, "report path (stdout when omitted)");
  bench->add_option("--format", be.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--blur", be.blur, "Gaussian sigma applied before downscaling")->capture_default_str();

  SynthFlags sy;
  CLI::App* synth = app.add_subcommand("synth", "write synthetic phantoms");
  synth->add_option("n,--synthetic", sy.n, "number of phantoms")->required();
  synth->add_option("--out", sy.out, "output directory")->capture_default_str();
  synth->add_option("--seed", sy.spec.seed, "first seed")->capture_default_str();
  synth->add_option("--kind", sy.kind, "ellipses, bars, gradient or mixed")->capture_default_str();
  synth->add_option("--width", sy.spec.width, "width")->capture_default_str();
  synth->add_option("--height", sy.spec.height, "height")->capture_default_str();
  synth->add_option("--count", sy.spec.count, "primitives per phantom")->capture_default_str();
  synth->add_option("--noise", sy.spec.noise_sigma, "noise sigma")->capture_default_str();
  synth->add_option("--bias", sy.spec.exposure_bias, "exposure bias in [-1, 1]")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (assess->parsed()) return cmd_assess(assess_inputs, assess_threshold, out, err);
    if (equalize_cmd->parsed()) return cmd_equalize(eq, out);
    if (enhance->parsed()) return cmd_enhance(en, out);
    if (train->parsed()) return cmd_train(tr, out);
    if (bench->parsed()) return cmd_bench(be, out);
    if (synth->parsed()) return cmd_synth(sy, out);
  } catch (const ConfigError& e) {
    err << "ConfigError: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "InvalidArgument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "DivergenceError: " << e.what() << '\n';
    return kExitProcessing;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitProcessing;
  }
  return kExitUsage;
}

}  // namespace xrayq::cli
