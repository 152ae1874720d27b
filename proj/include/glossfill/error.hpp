#pragma once

#include <stdexcept>
#include <string>

namespace glossfill {

/// Base for every error the library throws. `code()` is a stable
/// machine-readable name (e.g. "TokenCountMismatch") used by the CLI and the
/// HTTP layer; `what()` is the human-readable diagnostic.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

} // namespace glossfill
