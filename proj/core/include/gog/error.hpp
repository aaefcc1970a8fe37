#pragma once

#include <stdexcept>
#include <string>

namespace gog {

/// Malformed or inconsistent input data (files, datasets, caches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A token in a dataset file could not be parsed.
class ParseError : public DataError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace gog
