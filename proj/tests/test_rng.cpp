#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "latsim/rng.hpp"

using namespace latsim;

TEST_CASE("same seed and stream id reproduce the same sequence") {
  RngStream a(42, 3);
  RngStream b(42, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream ids give distinct sequences") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("draw counter tracks consumption") {
  RngStream r(1, 1);
  CHECK(r.draws() == 0);
  r.next_unit();
  CHECK(r.draws() == 1);
  r.next_exponential(2.0);
  CHECK(r.draws() == 2);
}

TEST_CASE("unit draws are uniform-ish and in range") {
  RngStream r(7, 7);
  double sum = 0.0;
  double min = 1.0;
  double max = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    min = std::min(min, u);
    max = std::max(max, u);
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  CHECK(min < 0.001);
  CHECK(max > 0.999);
}

TEST_CASE("exponential draws hit the requested mean") {
  RngStream r(11, 2);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += r.next_exponential(3.0);
  CHECK(sum / n == doctest::Approx(3.0).epsilon(0.02));
  CHECK(r.next_exponential(0.0) == 0.0);
}

TEST_CASE("bounded draws stay in range and cover all values") {
  RngStream r(5, 5);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t v = r.next_below(8);
    CHECK(v < 8);
    seen.insert(v);
  }
  CHECK(seen.size() == 8);
}
