#pragma once

#include <cstdint>
#include <vector>

namespace spavar {

/// Largest first argument accepted by stirling2() / StirlingTable. Every
/// table entry up to this row fits a uint64 exactly (the row maximum for
/// l = 25 is below 2^63), so all arithmetic stays in exact integers.
inline constexpr int kStirlingCap = 25;

/// Triangular table of Stirling numbers of the second kind, built once by
/// the recurrence S(l, m) = m*S(l-1, m) + S(l-1, m-1).
class StirlingTable {
 public:
  /// Builds rows 1..max_l. Throws std::domain_error if max_l < 1 or
  /// max_l > kStirlingCap.
  explicit StirlingTable(int max_l);

  /// Number of partitions of l distinguishable elements into exactly m
  /// nonempty sets. Returns 0 for m > l or m == 0 (with l >= 1).
  std::uint64_t entry(int l, int m) const;

  int max_l() const noexcept { return max_l_; }

 private:
  int max_l_;
  std::vector<std::uint64_t> rows_;  // row l packed at offset l*(l-1)/2, m = 1..l
};

/// Stirling number of the second kind {l over m} from a shared table.
/// Preconditions: l >= 1, m >= 0, l <= kStirlingCap (std::domain_error
/// otherwise).
std::uint64_t stirling2(int l, int m);

/// n*(n-1)*...*(n-m+1) as an exact integer; the empty product (m = 0) is 1.
/// Throws std::domain_error when m > n or the product overflows 64 bits.
std::uint64_t falling_factorial(std::int64_t n, int m);

}  // namespace spavar
