#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roadnet {

// Malformed data line in an edge-list stream. Line numbers are 1-based and
// absolute within the stream.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::string text, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what + " in \"" + text + "\""),
        source_(std::move(source)),
        line_(line),
        text_(std::move(text)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string text_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

// Option outside the range an operation accepts.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyGraphError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// k-means seeding could not find k distinct centroids.
class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roadnet
