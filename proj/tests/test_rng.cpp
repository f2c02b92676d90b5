#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "vplague/rng.hpp"

using namespace vplague;

TEST_CASE("same seed, same stream; different seeds diverge") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs |= x != c();
  }
  CHECK(differs);
}

TEST_CASE("xoshiro256** reference output after splitmix64 seeding") {
  // Independent re-derivation of the first output for seed 0.
  auto splitmix = [](std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t x = 0;
  std::uint64_t s[4];
  for (auto& v : s) v = splitmix(x);
  const std::uint64_t m = s[1] * 5;
  const std::uint64_t expected = ((m << 7) | (m >> 57)) * 9;
  Rng r(0);
  CHECK(r() == expected);
}

TEST_CASE("uniform01 stays in [0, 1) and has mean near 1/2") {
  Rng r(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("bernoulli at 0 and 1 consumes no draw") {
  Rng a(5), b(5);
  CHECK_FALSE(a.bernoulli(0.0));
  CHECK(a.bernoulli(1.0));
  CHECK(a() == b());
}

TEST_CASE("uniform_int covers the closed range evenly") {
  Rng r(11);
  std::vector<long> counts(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const auto v = r.uniform_int(7, 11);
    REQUIRE(v >= 7);
    REQUIRE(v <= 11);
    ++counts[v - 7];
  }
  CHECK(testing::chi_square_uniform(counts) < testing::kChi2Crit99[4]);
  CHECK(r.uniform_int(3, 3) == 3);
}

TEST_CASE("poisson and geometric means") {
  Rng r(3);
  double sp = 0.0, sg = 0.0, sb = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    sp += r.poisson(0.3);
    sg += static_cast<double>(r.geometric(0.2));
    sb += r.poisson(50.0);
  }
  CHECK(sp / n == doctest::Approx(0.3).epsilon(0.02));
  CHECK(sg / n == doctest::Approx(4.0).epsilon(0.02));  // (1 - p) / p
  CHECK(sb / n == doctest::Approx(50.0).epsilon(0.01));
}
