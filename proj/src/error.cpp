#include "uninorm/error.hpp"

#include "uninorm/budget.hpp"

#include <limits>

namespace uninorm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_element: return "invalid-element";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::invalid_majorant: return "invalid-majorant";
    case ErrorKind::precondition_violation: return "precondition-violation";
    case ErrorKind::too_small: return "too-small";
    case ErrorKind::search_failure: return "search-failure";
    case ErrorKind::io_failure: return "io-failure";
  }
  return "unknown";
}

CutoffTooSmall::CutoffTooSmall(std::int64_t n, std::int64_t min_n)
    : Error(ErrorKind::too_small,
            "interval length " + std::to_string(n) + " is below the minimum N_0 = " +
                std::to_string(min_n)),
      min_n_(min_n) {}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exponent) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > kMax / base) return kMax;
    result *= base;
  }
  return result;
}

}  // namespace uninorm
