#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corefud {

// Malformed input: bad column counts, bad ids, unbalanced brackets, ...
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : std::runtime_error(format(source, line, message)),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& message) {
    std::string out = source.empty() ? std::string("<input>") : source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::string source_;
  std::size_t line_;
};

// A document whose coreference layer cannot be written back as brackets.
class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key and response cannot be paired (missing documents, differing tokens).
class PairingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  std::string source;
  std::size_t line = 0;
  std::string message;

  std::string str() const {
    std::string out = source.empty() ? std::string("<input>") : source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": warning: " + message;
  }
};

using Diagnostics = std::vector<Diagnostic>;

inline void warn(Diagnostics* sink, std::string source, std::size_t line,
                 std::string message) {
  if (sink != nullptr) sink->push_back({std::move(source), line, std::move(message)});
}

}  // namespace corefud
