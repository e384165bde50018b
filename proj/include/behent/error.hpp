#pragma once

#include <stdexcept>
#include <string>

namespace behent {

// Error taxonomy shared by the library and the CLI exit codes:
// Validation = bad parameters or malformed configuration,
// Numeric    = degenerate data or non-finite results,
// Io         = file system / parse failures.
enum class ErrorCategory { Validation, Numeric, Io };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, std::string module, const std::string& detail)
    : std::runtime_error(module + ": " + detail)
    , category_(category)
    , module_(std::move(module)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& module() const noexcept { return module_; }

private:
  ErrorCategory category_;
  std::string module_;
};

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::Numeric: return "numeric";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

[[noreturn]] inline void throw_validation(const std::string& module, const std::string& detail) {
  throw Error(ErrorCategory::Validation, module, detail);
}

[[noreturn]] inline void throw_numeric(const std::string& module, const std::string& detail) {
  throw Error(ErrorCategory::Numeric, module, detail);
}

[[noreturn]] inline void throw_io(const std::string& module, const std::string& detail) {
  throw Error(ErrorCategory::Io, module, detail);
}

} // namespace behent
