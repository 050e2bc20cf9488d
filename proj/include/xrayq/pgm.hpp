#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "xrayq/image.hpp"

namespace xrayq {

// Decodes a binary PGM (P5, maxval 255). Comment lines are skipped.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

// Canonical encoding: "P5\n<w> <h>\n255\n" followed by row-major pixels.
std::vector<std::uint8_t> write_pgm(const GrayImage& img);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace xrayq
