#include <doctest.h>

#include <cmath>
#include <vector>

#include "pasql/rng.hpp"

using pasql::CounterRng;

TEST_SUITE("rng") {

TEST_CASE("identical keys replay the identical sequence") {
  CounterRng a(42, CounterRng::kEnvStream);
  CounterRng b(42, CounterRng::kEnvStream);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("at() is a pure function of the counter") {
  CounterRng a(7, 3);
  std::vector<std::uint64_t> expected;
  for (int i = 0; i < 64; ++i) expected.push_back(a.at(i));
  CounterRng b(7, 3);
  for (int i = 0; i < 64; ++i) CHECK(b.next_u64() == expected[i]);
  // Reading out of order does not disturb the stream.
  CHECK(a.at(5) == expected[5]);
  CHECK(a.at(63) == expected[63]);
}

TEST_CASE("streams of one seed do not collide") {
  CounterRng env(123, CounterRng::kEnvStream);
  CounterRng pol(123, CounterRng::kPolicyStream);
  int same = 0;
  for (int i = 0; i < 256; ++i)
    if (env.next_u64() == pol.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("seeds separate") {
  CounterRng a(1, 1), b(2, 1);
  int same = 0;
  for (int i = 0; i < 256; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("next_double lies in [0, 1) and fills the range") {
  CounterRng r(99, 1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("counter advances once per draw") {
  CounterRng r(5, 1);
  CHECK(r.counter() == 0);
  r.next_u64();
  r.next_double();
  CHECK(r.counter() == 2);
}

TEST_CASE("sample_cumulative hits categorical frequencies") {
  // cum = {0.3, 0.55, 1.0} encodes masses {0.3, 0.25, 0.45}.
  const std::vector<double> cum = {0.3, 0.55, 1.0};
  const double mass[3] = {0.3, 0.25, 0.45};
  CounterRng r(2024, 1);
  const int n = 200000;
  int count[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) ++count[r.sample_cumulative(cum)];
  for (int k = 0; k < 3; ++k) {
    const double freq = static_cast<double>(count[k]) / n;
    const double sigma = std::sqrt(mass[k] * (1 - mass[k]) / n);
    CHECK(std::abs(freq - mass[k]) < 4 * sigma);
  }
}

TEST_CASE("sample_cumulative never returns a zero-mass bucket") {
  // First bucket has zero mass, so u * total < cum[0] = 0 can never hold.
  const std::vector<double> cum = {0.0, 1.0};
  CounterRng r(1, 1);
  for (int i = 0; i < 10000; ++i) CHECK(r.sample_cumulative(cum) == 1);
}

TEST_CASE("sample_cumulative with unnormalized weights") {
  // Totals other than 1 are scaled out by the u * total comparison.
  const std::vector<double> cum = {2.0, 6.0};
  CounterRng r(77, 1);
  const int n = 100000;
  int first = 0;
  for (int i = 0; i < n; ++i)
    if (r.sample_cumulative(cum) == 0) ++first;
  const double freq = static_cast<double>(first) / n;
  CHECK(std::abs(freq - 1.0 / 3.0) < 0.01);
}

TEST_CASE("sample_cumulative rejects an empty support") {
  std::vector<double> cum;
  CounterRng r(1, 1);
  CHECK_THROWS_AS(r.sample_cumulative(cum), std::invalid_argument);
}

TEST_CASE("single-bucket support is degenerate") {
  const std::vector<double> cum = {1.0};
  CounterRng r(1, 1);
  for (int i = 0; i < 100; ++i) CHECK(r.sample_cumulative(cum) == 0);
}

}  // TEST_SUITE("rng")
