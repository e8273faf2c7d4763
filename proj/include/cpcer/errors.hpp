#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpcer {

// Input-side failures: unreadable files, malformed records, broken encodings.
// The CLI maps these to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::string message, std::string source = {}, std::size_t line = 0)
      : std::runtime_error(format(message, source, line)),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& source,
                            std::size_t line) {
    std::string out;
    if (!source.empty()) {
      out += source;
      if (line > 0) out += ":" + std::to_string(line);
      out += ": ";
    }
    return out + message;
  }

  std::string source_;
  std::size_t line_;
};

class InvalidEncoding : public ParseError {
 public:
  explicit InvalidEncoding(std::size_t byte_offset)
      : ParseError("invalid UTF-8 at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  InvalidEncoding(std::string message, std::string source, std::size_t line)
      : ParseError(std::move(message), std::move(source), line), byte_offset_(0) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class IoError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Scoring-side failures. The CLI maps these to exit code 3.
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyReference : public ScoringError {
 public:
  using ScoringError::ScoringError;
};

class TooManySpeakers : public ScoringError {
 public:
  using ScoringError::ScoringError;
};

class NoOverlap : public ScoringError {
 public:
  using ScoringError::ScoringError;
};

}  // namespace cpcer
