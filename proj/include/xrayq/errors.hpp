#pragma once

#include <stdexcept>
#include <string>

namespace xrayq {

// Malformed input bytes (PGM header, truncated payload).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input that this library does not handle (e.g. maxval != 255).
struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dimension or channel mismatch between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Weight file with bad magic, version, or truncated payload.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weight file that parses but violates the architecture invariants.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(int epoch, double lr, const std::string& what)
      : std::runtime_error(what), epoch(epoch), lr(lr) {}
  int epoch;
  double lr;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace xrayq
