#include <doctest.h>

#include "ztorch/domain.hpp"
#include "ztorch/rng.hpp"

using namespace ztorch;

TEST_CASE("euclidean distance examples") {
  CHECK(euclidean_distance({0.25, 0.25, 0.25}, {0.25, 0.25, 0.25}) == 0.0);
  CHECK(euclidean_distance({0.75, 0.75, 0.75}, {0.25, 0.25, 0.25}) == doctest::Approx(0.8660254037844386).epsilon(1e-12));
  CHECK(euclidean_distance({1.0, 0.0}, {0.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(euclidean_distance({1.0, 0.0}, {0.0, 0.0, 0.0}), ContractViolation);
}

TEST_CASE("l1 norm examples") {
  CHECK(l1_norm({0.0, 0.0, 0.0}) == 0.0);
  CHECK(std::abs(l1_norm({0.791, 0.033, 0.912}) - 1.736) < 1e-9);
  CHECK(l1_norm({0.25, 0.25, 0.25}) == 0.75);
}

TEST_CASE("distance is a metric on random triples") {
  Rng rng(7, 1);
  for (int k = 0; k < 10000; ++k) {
    KpiVector a{rng.uniform(), rng.uniform(), rng.uniform()};
    KpiVector b{rng.uniform(), rng.uniform(), rng.uniform()};
    KpiVector c{rng.uniform(), rng.uniform(), rng.uniform()};
    const double ab = euclidean_distance(a, b);
    REQUIRE(ab == euclidean_distance(b, a));
    REQUIRE(ab <= euclidean_distance(a, c) + euclidean_distance(c, b) + 1e-12);
    REQUIRE(squared_distance(a, b) == doctest::Approx(ab * ab));
  }
}

TEST_CASE("clamping") {
  Rng rng(3, 2);
  for (int k = 0; k < 1000; ++k) {
    KpiVector v{rng.uniform(), rng.uniform(), rng.uniform()};
    REQUIRE(v.is_valid());
    REQUIRE(v.clamped() == v);
  }
  const KpiVector wild{-0.5, 1.5, std::nan("")};
  CHECK_FALSE(wild.is_valid());
  const auto c = wild.clamped();
  CHECK(c == KpiVector{0.0, 1.0, 0.0});
  CHECK(c.clamped() == c);
}

TEST_CASE("kpi vector bounds and arithmetic") {
  CHECK_THROWS_AS(KpiVector(kMaxKpis + 1), ContractViolation);
  KpiVector a{0.1, 0.2};
  CHECK_THROWS_AS(a.at(2), ContractViolation);
  CHECK((a + KpiVector{0.1, 0.1}).fits_within({0.2, 0.3}));
  CHECK_FALSE((a + KpiVector{0.2, 0.1}).fits_within({0.2, 0.3}));
  CHECK_THROWS_AS(a += KpiVector{0.1}, ContractViolation);
}

TEST_CASE("trace slots must increase") {
  VnfTrace t(4);
  t.append(0, {0.1, 0.1, 0.1});
  t.append(5, {0.1, 0.1, 0.1});
  CHECK_THROWS_AS(t.append(5, {0.1, 0.1, 0.1}), ContractViolation);
  CHECK(t.size() == 2);
}

TEST_CASE("affinity model invariants") {
  AffinityModel m;
  m.centers = {{0.2, 0.2}, {0.8, 0.8}};
  m.group_of = {0, 1, 0};
  CHECK_NOTHROW(m.validate());
  CHECK(m.group_sizes() == std::vector<std::size_t>{2, 1});
  m.group_of = {0, 0, 0};
  CHECK_THROWS_AS(m.validate(), ContractViolation);  // empty group
  m.group_of = {0, 2, 1};
  CHECK_THROWS_AS(m.validate(), ContractViolation);  // bad group index
  m.centers.pop_back();
  m.group_of = {0, 0};
  CHECK_THROWS_AS(m.validate(), ContractViolation);  // N < 2
}

TEST_CASE("rng streams are independent of draw order") {
  Rng a(11, stream::vnf_base + 3);
  Rng b(11, stream::vnf_base + 3);
  Rng other(11, stream::vnf_base + 4);
  for (int k = 0; k < 5; ++k) other.normal();
  for (int k = 0; k < 100; ++k) REQUIRE(a.normal() == b.normal());
  Rng c(11, stream::vnf_base + 4);
  Rng d(11, stream::vnf_base + 3);
  CHECK(c.uniform() != d.uniform());
}
