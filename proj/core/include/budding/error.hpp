#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace budding {

// Malformed or inconsistent input data. Carries every issue found, not just
// the first, so a bad corpus can be fixed in one pass.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::string message);
  explicit ValidationError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace budding
