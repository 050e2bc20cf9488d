#include "xrayq/nn/weights.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "xrayq/pgm.hpp"

namespace xrayq::nn {

namespace {

constexpr std::uint8_t kMagic[4] = {'X', 'S', 'R', 'W'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void bytes(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("weights: truncated file");
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_weights(const SrModel& model) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kWeightFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.arch));
  w.u8(model.residual ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(model.layers.size()));
  for (const Layer& l : model.layers) {
    w.u32(static_cast<std::uint32_t>(l.out_channels));
    w.u32(static_cast<std::uint32_t>(l.in_channels));
    w.u32(static_cast<std::uint32_t>(l.kernel_size));
    w.u8(static_cast<std::uint8_t>(l.activation));
    // row-major weights(o, (c*k+i)*k+j) is already out x in x k x k order
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) w.f64(l.weights.data()[i]);
    for (Eigen::Index i = 0; i < l.biases.size(); ++i) w.f64(l.biases(i));
  }
  return w.take();
}

SrModel load_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("weights: bad magic");
  Reader r(bytes.subspan(4));
  const std::uint32_t version = r.u32();
  if (version != kWeightFormatVersion) throw FormatError("weights: unsupported version " + std::to_string(version));
  const std::uint8_t arch = r.u8();
  if (arch > 1) throw FormatError("weights: unknown architecture code " + std::to_string(arch));
  const std::uint8_t residual = r.u8();
  if (residual > 1) throw FormatError("weights: residual flag must be 0 or 1");
  const std::uint32_t layer_count = r.u32();

  SrModel m;
  m.arch = static_cast<Arch>(arch);
  m.residual = residual == 1;
  for (std::uint32_t li = 0; li < layer_count; ++li) {
    const std::uint32_t out = r.u32();
    const std::uint32_t in = r.u32();
    const std::uint32_t k = r.u32();
    const std::uint8_t act = r.u8();
    if (act > 1) throw FormatError("weights: unknown activation code " + std::to_string(act));
    if (out == 0 || in == 0 || k == 0) throw ValidationError("weights: zero-sized layer " + std::to_string(li));
    const std::uint64_t n_weights = std::uint64_t{out} * in * k * k;
    // each parameter is 8 bytes; check before allocating
    if (n_weights > r.remaining() / 8) throw FormatError("weights: truncated file");
    Layer l(out, in, k, static_cast<Activation>(act));
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) l.weights.data()[i] = r.f64();
    for (Eigen::Index i = 0; i < l.biases.size(); ++i) l.biases(i) = r.f64();
    m.layers.push_back(std::move(l));
  }
  if (r.remaining() != 0) throw FormatError("weights: trailing bytes after the last layer");
  m.validate();
  return m;
}

void save_weights_file(const std::filesystem::path& path, const SrModel& model) {
  write_file(path, save_weights(model));
}

SrModel load_weights_file(const std::filesystem::path& path) { return load_weights(read_file(path)); }

}  // namespace xrayq::nn
