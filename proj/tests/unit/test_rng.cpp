#include <set>
#include <vector>

#include "doctest.h"
#include "smdtn/rng.hpp"

using namespace smdtn;

namespace {
std::vector<std::uint64_t> draw(std::uint64_t seed, std::string_view label, int n = 16) {
  auto s = rng_stream(seed, label);
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(s.next());
  return out;
}
}  // namespace

TEST_CASE("rng streams are reproducible and independent") {
  CHECK(draw(42, "traffic") == draw(42, "traffic"));
  CHECK(draw(42, "traffic") != draw(42, "placement"));
  CHECK(draw(1, "traffic") != draw(2, "traffic"));
}

TEST_CASE("uniform01 and below stay in range") {
  auto s = rng_stream(9, "placement");
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto b = s.below(7);
    CHECK(b < 7);
    seen.insert(b);
  }
  CHECK(seen.size() == 7);
  CHECK(s.below(1) == 0);
}
