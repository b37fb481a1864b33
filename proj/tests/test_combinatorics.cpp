#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "spavar/combinatorics.hpp"

using spavar::StirlingTable;
using spavar::falling_factorial;
using spavar::stirling2;

TEST_CASE("stirling2 reproduces the small table exactly") {
  // rows 1..4: {1}, {1,1}, {1,3,1}, {1,7,6,1}
  const std::uint64_t expected[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 3, 1, 0}, {1, 7, 6, 1}};
  for (int l = 1; l <= 4; ++l) {
    for (int m = 1; m <= 4; ++m) {
      CHECK(stirling2(l, m) == expected[l - 1][m - 1]);
    }
  }
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(5, 2) == 15);
  CHECK(stirling2(1, 0) == 0);
}

TEST_CASE("recurrence agrees with the alternating-sum closed form") {
  for (int l = 1; l <= 10; ++l) {
    for (int m = 1; m <= l; ++m) {
      CHECK(stirling2(l, m) == oracles::stirling2_closed_form(l, m));
    }
  }
}

TEST_CASE("row sums are Bell numbers") {
  for (int l = 1; l <= 10; ++l) {
    std::uint64_t row_sum = 0;
    for (int m = 1; m <= l; ++m) row_sum += stirling2(l, m);
    CHECK(row_sum == oracles::bell_numbers()[l - 1]);
  }
}

TEST_CASE("stirling2 domain errors") {
  CHECK_THROWS_AS(stirling2(26, 3), std::domain_error);
  CHECK_THROWS_AS(stirling2(0, 0), std::domain_error);
  CHECK_THROWS_AS(stirling2(3, -1), std::domain_error);
  CHECK(stirling2(spavar::kStirlingCap, 1) == 1);
  CHECK(stirling2(3, 7) == 0);
}

TEST_CASE("StirlingTable boundary entries") {
  const StirlingTable table(12);
  for (int l = 1; l <= 12; ++l) {
    CHECK(table.entry(l, 1) == 1);
    CHECK(table.entry(l, l) == 1);
    if (l < 12) CHECK(table.entry(l, l + 1) == 0);
  }
  CHECK_THROWS_AS(table.entry(13, 1), std::domain_error);
  CHECK_THROWS_AS(StirlingTable(0), std::domain_error);
  CHECK_THROWS_AS(StirlingTable(26), std::domain_error);
}

TEST_CASE("falling_factorial") {
  CHECK(falling_factorial(5, 2) == 20);
  CHECK(falling_factorial(7, 0) == 1);
  CHECK(falling_factorial(4, 4) == 24);
  CHECK(falling_factorial(0, 0) == 1);
  CHECK_THROWS_AS(falling_factorial(3, 4), std::domain_error);
  CHECK_THROWS_AS(falling_factorial(-1, 0), std::domain_error);
  // 21! overflows 64 bits
  CHECK_THROWS_AS(falling_factorial(25, 25), std::domain_error);
  CHECK(falling_factorial(20, 20) == 2432902008176640000ULL);
}

TEST_CASE("falling factorial splits multiplicatively") {
  // ff(n, a + b) = ff(n, a) * ff(n - a, b)
  for (std::int64_t n = 1; n <= 12; ++n) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        CHECK(falling_factorial(n, a + b) ==
              falling_factorial(n, a) * falling_factorial(n - a, b));
      }
    }
  }
}
