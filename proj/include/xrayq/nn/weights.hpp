#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "xrayq/nn/model.hpp"

namespace xrayq::nn {

// Little-endian layout:
//   "XSRW" | version u32 = 1 | arch u8 | residual u8 | layer_count u32
//   per layer: out u32 | in u32 | k u32 | activation u8
//              | out*in*k*k f64 weights | out f64 biases
inline constexpr std::uint32_t kWeightFormatVersion = 1;

std::vector<std::uint8_t> save_weights(const SrModel& model);

// Throws FormatError on bad magic/version/truncation and ValidationError when
// the layers do not match the declared architecture.
SrModel load_weights(std::span<const std::uint8_t> bytes);

void save_weights_file(const std::filesystem::path& path, const SrModel& model);
SrModel load_weights_file(const std::filesystem::path& path);

}  // namespace xrayq::nn
