#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uninorm {

enum class ErrorKind {
  invalid_element,
  invalid_parameter,
  invalid_input,
  budget_exceeded,
  invalid_majorant,
  precondition_violation,
  too_small,
  search_failure,
  io_failure,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an interval is shorter than the minimal length N_0 required
/// by the cut-off construction; carries that minimal length.
class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(std::int64_t n, std::int64_t min_n);

  std::int64_t min_n() const noexcept { return min_n_; }

 private:
  std::int64_t min_n_;
};

}  // namespace uninorm
