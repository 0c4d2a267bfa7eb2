#pragma once

#include <stdexcept>
#include <string>

namespace hont {

enum class ErrorCode {
  Undefined,
  InvalidArgument,
  NotAPrefix,
  Inapplicable,
  EndpointMismatch,
  Parse,
  LevelUnsupported,
  Unreachable,
  BudgetExhausted,
  PreconditionViolated,
  SignatureMismatch,
  SizeLimit,
  Syntax,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the 1-based line (system files) or 0-based column (formulas).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t where, const std::string& message)
      : Error(code, message), where_(where) {}
  std::size_t where() const { return where_; }

 private:
  std::size_t where_;
};

}  // namespace hont
