#ifndef DLAP_ERROR_HPP
#define DLAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dlap {

enum class ErrorKind {
  domain,
  bracketing,
  pole,
  size,
  not_adapted,
  degenerate,
  zero_child,
  null_set,
  invalid_run,
  precision,
  consistency,
  parse,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::bracketing: return "bracketing";
    case ErrorKind::pole: return "pole";
    case ErrorKind::size: return "size";
    case ErrorKind::not_adapted: return "not-adapted";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::zero_child: return "zero-child";
    case ErrorKind::null_set: return "null-set";
    case ErrorKind::invalid_run: return "invalid-run";
    case ErrorKind::precision: return "precision";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` tells callers which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  /// Precision errors carry the number of decimal digits that would let the computation proceed.
  Error(ErrorKind kind, const std::string& what, unsigned required_digits)
      : Error(kind, what) {
    required_digits_ = required_digits;
  }

  ErrorKind kind() const noexcept { return kind_; }
  unsigned required_digits() const noexcept { return required_digits_; }

 private:
  ErrorKind kind_;
  unsigned required_digits_ = 0;
};

}  // namespace dlap

#endif  // DLAP_ERROR_HPP
