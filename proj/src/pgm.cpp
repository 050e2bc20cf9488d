#include "xrayq/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace xrayq {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads one token.
  std::string token() {
    skip_separators();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) throw ParseError("pgm: unexpected end of header");
    return tok;
  }

  long number(const char* what) {
    const std::string tok = token();
    long value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw ParseError(std::string("pgm: bad ") + what + " '" + tok + "'");
      value = value * 10 + (c - '0');
      if (value > 1'000'000'000L) throw ParseError(std::string("pgm: ") + what + " too large");
    }
    return value;
  }

  // The header ends with exactly one whitespace byte after maxval.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("pgm: missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("pgm: missing P5 magic");
  }
  HeaderReader reader(bytes.subspan(2));
  if (bytes.size() > 2 && !std::isspace(bytes[2]) && bytes[2] != '#') {
    throw ParseError("pgm: missing separator after magic");
  }
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (width <= 0 || height <= 0) throw ParseError("pgm: dimensions must be positive");
  if (maxval != 255) throw UnsupportedFormat("pgm: maxval " + std::to_string(maxval) + " (only 255 supported)");
  reader.end_of_header();

  const std::size_t offset = 2 + reader.position();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - offset < count) throw ParseError("pgm: truncated pixel payload");

  GrayImage img(height, width);
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(offset), count, img.data());
  return img;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data(), img.data() + img.size());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

GrayImage load_pgm(const std::filesystem::path& path) { return read_pgm(read_file(path)); }

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, write_pgm(img));
}

}  // namespace xrayq
