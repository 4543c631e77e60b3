#include "budding/error.hpp"

namespace budding {
namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  if (issues.empty()) return "validation failed";
  std::string out = issues.front();
  for (std::size_t i = 1; i < issues.size(); ++i) {
    out += '\n';
    out += issues[i];
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::string message)
    : std::runtime_error(message), issues_{std::move(message)} {}

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace budding
