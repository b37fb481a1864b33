#include "spavar/combinatorics.hpp"

#include <stdexcept>
#include <string>

namespace spavar {

StirlingTable::StirlingTable(int max_l) : max_l_(max_l) {
  if (max_l < 1 || max_l > kStirlingCap) {
    throw std::domain_error("StirlingTable: max_l must be in [1, " +
                            std::to_string(kStirlingCap) + "], got " +
                            std::to_string(max_l));
  }
  rows_.assign(static_cast<std::size_t>(max_l) * (max_l + 1) / 2, 0);
  auto at = [this](int l, int m) -> std::uint64_t& {
    return rows_[static_cast<std::size_t>(l) * (l - 1) / 2 + (m - 1)];
  };
  at(1, 1) = 1;
  for (int l = 2; l <= max_l; ++l) {
    at(l, 1) = 1;
    for (int m = 2; m < l; ++m) {
      at(l, m) = static_cast<std::uint64_t>(m) * at(l - 1, m) + at(l - 1, m - 1);
    }
    at(l, l) = 1;
  }
}

std::uint64_t StirlingTable::entry(int l, int m) const {
  if (l < 1 || l > max_l_) {
    throw std::domain_error("StirlingTable::entry: l out of range: " +
                            std::to_string(l));
  }
  if (m < 0) throw std::domain_error("StirlingTable::entry: m must be >= 0");
  if (m == 0 || m > l) return 0;
  return rows_[static_cast<std::size_t>(l) * (l - 1) / 2 + (m - 1)];
}

std::uint64_t stirling2(int l, int m) {
  static const StirlingTable table(kStirlingCap);
  return table.entry(l, m);
}

std::uint64_t falling_factorial(std::int64_t n, int m) {
  if (n < 0) throw std::domain_error("falling_factorial: n must be >= 0");
  if (m < 0 || m > n) {
    throw std::domain_error("falling_factorial: need 0 <= m <= n, got m=" +
                            std::to_string(m) + " n=" + std::to_string(n));
  }
  unsigned __int128 prod = 1;
  for (int k = 0; k < m; ++k) {
    prod *= static_cast<unsigned __int128>(n - k);
    if (prod > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw std::domain_error("falling_factorial: product exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(prod);
}

}  // namespace spavar
