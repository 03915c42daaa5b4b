#pragma once

#include <cstdint>

namespace uninorm {

/// Shared work limits for every enumeration-based kernel.
struct Budget {
  /// Maximum number of enumerated terms for a single average
  /// (e.g. |Z|^{s+1} for the direct Gowers norm).
  std::uint64_t enumeration = 1'000'000'000ULL;
  /// Maximum number of sign patterns visited by an exhaustive search.
  std::uint64_t exhaustive = 1ULL << 24;
};

inline constexpr Budget kDefaultBudget{};

/// Saturating integer power, used for budget checks.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exponent);

}  // namespace uninorm
