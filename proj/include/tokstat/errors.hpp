#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tokstat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CoNLL-U input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, const std::string& source = {})
      : Error(format(message, line, source)), message_(message), line_(line) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            const std::string& source) {
    std::string where = source;
    if (line != 0) where += (source.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? message : where + ": " + message;
  }

  std::string message_;
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class VocabError : public Error {
 public:
  using Error::Error;
};

// Ratio requested over an empty denominator (e.g. fertility of a corpus without words).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class ModelNotFoundError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

class IntegrityError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

// Remote unreachable and nothing usable in the cache.
class UnavailableError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

}  // namespace tokstat
