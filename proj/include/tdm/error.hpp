#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdm {

/// Base class for every hard error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed XML handed to the TEI reader.
class TeiParseError : public Error {
 public:
  TeiParseError(const std::string& message, std::size_t byte_offset)
      : Error(message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Raised by scorers. Transport problems are retryable, protocol violations are not.
class ScorerError : public Error {
 public:
  ScorerError(const std::string& message, bool retryable)
      : Error(message), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class ProtocolError : public ScorerError {
 public:
  explicit ProtocolError(const std::string& message) : ScorerError(message, false) {}
};

/// A pipeline stage was started before the stage that produces its input.
class MissingInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdm
