#pragma once

#include <stdexcept>
#include <string>

namespace fpovm {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
  numerical_failure,
  not_invertible,
  degenerate_basis,
  space_mismatch,
  dimension_mismatch,
  not_a_frame,
  invalid_povm,
  invalid_isometry,
  not_absolutely_continuous,
  mismatched_decomposition,
  size_limit,
  parse,
  schema,
  validation,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::not_invertible: return "not-invertible";
    case ErrorKind::degenerate_basis: return "degenerate-basis";
    case ErrorKind::space_mismatch: return "space-mismatch";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::not_a_frame: return "not-a-frame";
    case ErrorKind::invalid_povm: return "invalid-povm";
    case ErrorKind::invalid_isometry: return "invalid-isometry";
    case ErrorKind::not_absolutely_continuous: return "not-absolutely-continuous";
    case ErrorKind::mismatched_decomposition: return "mismatched-decomposition";
    case ErrorKind::size_limit: return "size-limit";
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
    case ErrorKind::validation: return "validation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fpovm
