#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixkern {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EtaOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooFewExamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LabelDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateLabels : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line_no)
      : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
  std::size_t line;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace mixkern
