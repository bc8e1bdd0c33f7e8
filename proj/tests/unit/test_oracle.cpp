#include <doctest.h>

#include <sstream>

#include "ztorch/oracle.hpp"
#include "ztorch/placement.hpp"

using namespace ztorch;

TEST_CASE("oracle suite passes with documented instance counts") {
  const auto rep = run_oracle_suite();
  REQUIRE(rep.suites.size() == 3);
  CHECK(rep.passed());
  CHECK(rep.suites[0].instances >= 100);
  CHECK(rep.suites[1].instances >= 200);
  std::ostringstream os;
  write_oracle_report(os, rep);
  CHECK(os.str().rfind("# schema: ztorch.oracle/1\n", 0) == 0);
}

TEST_CASE("faulty tie-break is caught") {
  testing::set_faulty_tie_break(true);
  const auto r = placement_oracle();
  testing::set_faulty_tie_break(false);
  CHECK_FALSE(r.passed());
  CHECK(r.detail.find("tie broken differently") != std::string::npos);
}

TEST_CASE("sequence enumerator") {
  const std::vector<KpiVector> caps{{1.0}, {1.0}};
  const std::vector<std::vector<KpiVector>> forced{{{0.5}, {0.4}, {0.5}}, {{0.5}, {0.6}, {0.3}}};
  CHECK(optimum_by_enumeration(forced, std::vector<int>{0, 0, 1}, caps) == 1);
  const std::vector<std::vector<KpiVector>> none{{{0.9}, {0.9}, {0.9}}};
  CHECK_FALSE(optimum_by_enumeration(none, std::vector<int>{0, 0, 1}, caps).has_value());
}
