#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semtensor {

// Coarse failure classes; the CLI prints the name as a machine-parseable tag.
enum class ErrorCategory { kIo, kFormat, kSchema, kConfig, kNumeric, kEval };

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace semtensor
