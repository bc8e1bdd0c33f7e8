#include <doctest.h>

#include <algorithm>
#include <set>

#include "ztorch/affinity.hpp"
#include "ztorch/rng.hpp"

using namespace ztorch;

namespace {

std::vector<ProfilePoint> pts_from(std::initializer_list<KpiVector> xs) {
  std::vector<ProfilePoint> out;
  int id = 0;
  for (const auto& x : xs) out.push_back({id++, x});
  return out;
}

std::vector<ProfilePoint> random_points(Rng& rng, int n, std::size_t dims) {
  std::vector<ProfilePoint> out;
  for (int i = 0; i < n; ++i) {
    KpiVector v(dims);
    for (std::size_t z = 0; z < dims; ++z) v[z] = rng.uniform();
    out.push_back({i, v});
  }
  return out;
}

}  // namespace

TEST_CASE("initial centers on the diagonal") {
  const auto c2 = initial_centers(2, 3);
  std::set<double> firsts;
  for (const auto& c : c2) {
    CHECK(c[0] == c[1]);
    CHECK(c[1] == c[2]);
    firsts.insert(c[0]);
  }
  CHECK(firsts == std::set<double>{0.25, 0.75});
  const auto c4 = initial_centers(4, 2);
  CHECK(c4[0] == KpiVector{0.125, 0.125});
  CHECK(c4[1] == KpiVector{0.375, 0.375});
  CHECK(c4[2] == KpiVector{0.625, 0.625});
  CHECK(c4[3] == KpiVector{0.875, 0.875});
  CHECK_THROWS_AS(initial_centers(1, 3), ContractViolation);
}

TEST_CASE("grid schedule") {
  auto s = GridSchedule::for_points(3, 3);
  CHECK(s.delta(1) == doctest::Approx(0.125));
  CHECK(s.delta(2) == doctest::Approx(0.125 * std::pow(2.0, std::sqrt(3.0))));
  CHECK(s.delta(1000) == doctest::Approx(std::sqrt(3.0)));
  // Huge I underflows to the floor instead of 0.
  CHECK(GridSchedule::for_points(1000, 3).delta(1) == 1e-4);
  for (std::size_t i : {2u, 5u, 8u, 20u, 100u}) {
    const auto g = GridSchedule::for_points(i, 3);
    for (int t = 1; t < 400; ++t) {
      const double a = g.delta(t), b = g.delta(t + 1);
      const bool clamped = (a == g.delta_min && b == g.delta_min) || (a == g.delta_max && b == g.delta_max);
      REQUIRE((b > a || clamped));
    }
  }
  GridSchedule bad;
  bad.delta_min = 0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("snap to grid") {
  CHECK(snap_to_grid({0.2, 0.26, 0.97}, 0.25) == KpiVector{0.25, 0.25, 1.0});
  CHECK(snap_to_grid({0.2, 0.7}, 1e-4) == KpiVector{0.2, 0.7});
  // The lattice never leaves the unit box.
  CHECK(snap_to_grid({0.99}, 0.4) == KpiVector{0.8});
  CHECK_THROWS_AS(snap_to_grid({0.5}, 0.0), ContractViolation);
}

TEST_CASE("nearest center ties go to the lowest index") {
  const std::vector<KpiVector> c{{0.25, 0.25}, {0.75, 0.75}};
  CHECK(nearest_center({0.5, 0.5}, c) == 0);
  CHECK(nearest_center({0.6, 0.6}, c) == 1);
}

TEST_CASE("ekm separates two clusters") {
  const auto pts = pts_from({{0.18, 0.2, 0.21}, {0.22, 0.19, 0.2}, {0.2, 0.23, 0.18}, {0.21, 0.2, 0.2},
                             {0.8, 0.79, 0.82}, {0.81, 0.8, 0.78}, {0.79, 0.82, 0.8}, {0.8, 0.8, 0.81}});
  const auto r = ekm(pts, 2, GridSchedule::for_points(pts.size(), 3));
  r.model.validate();
  for (int i = 1; i < 4; ++i) CHECK(r.model.group(i) == r.model.group(0));
  for (int i = 5; i < 8; ++i) CHECK(r.model.group(i) == r.model.group(4));
  CHECK(r.model.group(0) != r.model.group(4));
  const auto bf = brute_force_affinity(pts, 2);
  for (int i = 0; i < 8; ++i)
    CHECK((bf.model.group(i) == bf.model.group(0)) == (r.model.group(i) == r.model.group(0)));
}

TEST_CASE("ekm degenerate inputs") {
  SUBCASE("identical points: repair keeps both groups non-empty") {
    std::vector<ProfilePoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({i, {0.4, 0.4}});
    const auto r = ekm(pts, 2, GridSchedule::for_points(6, 2));
    r.model.validate();
    auto sizes = r.model.group_sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 5});
    CHECK(affinity_objective(r.model, pts) == doctest::Approx(0.0));
  }
  SUBCASE("one point per group") {
    const auto pts = pts_from({{0.2, 0.3}, {0.7, 0.9}});
    const auto r = ekm(pts, 2, GridSchedule::for_points(2, 2));
    CHECK(affinity_objective(r.model, pts) == 0.0);
  }
  CHECK_THROWS_AS(ekm(pts_from({{0.2, 0.3}}), 2, GridSchedule::for_points(1, 2)), ContractViolation);
}

TEST_CASE("ekm properties on random inputs") {
  Rng rng(2024, 5);
  for (int k = 0; k < 60; ++k) {
    const int n_pts = 3 + static_cast<int>(rng.uniform_index(60));
    const int n = 2 + static_cast<int>(rng.uniform_index(std::min(6, n_pts - 1)));
    const auto pts = random_points(rng, n_pts, 3);
    const auto sched = GridSchedule::for_points(pts.size(), 3);
    const auto r = ekm(pts, n, sched);
    REQUIRE_NOTHROW(r.model.validate());
    REQUIRE(r.steps <= 500);
    // Assignment-step optimality against the returned centers, unless the
    // point was moved by the empty-group repair.
    const auto sizes = r.model.group_sizes();
    for (const auto& p : pts) {
      const int g = r.model.group(p.vnf_id);
      const int nearest = nearest_center(p.kpis, r.model.centers);
      if (g != nearest) REQUIRE(sizes[static_cast<std::size_t>(g)] == 1);
    }
    // Serial and parallel kernels give the same model.
    EkmOptions serial;
    serial.exec = Exec::serial;
    const auto s = ekm(pts, n, sched, serial);
    REQUIRE(s.model.group_of == r.model.group_of);
    REQUIRE(s.model.centers == r.model.centers);
    REQUIRE(s.steps == r.steps);
  }
}

TEST_CASE("ekm never beats the brute-force optimum") {
  Rng rng(77, 3);
  for (int k = 0; k < 40; ++k) {
    const auto pts = random_points(rng, 3 + static_cast<int>(rng.uniform_index(6)), 2);
    const auto r = ekm(pts, 2, GridSchedule::for_points(pts.size(), 2));
    const auto bf = brute_force_affinity(pts, 2);
    REQUIRE(affinity_objective(r.model, pts) >= bf.objective - 1e-9);
  }
}

TEST_CASE("affinity objective") {
  AffinityModel m;
  m.centers = {{0.5, 0.5}, {0.0, 0.0}};
  m.group_of = {0, 1};
  const auto pts = pts_from({{0.5, 0.5}, {0.0, 0.0}});
  CHECK(affinity_objective(m, pts) == 0.0);
  // Two points 0.4 apart around a midpoint center.
  m.centers = {{0.5, 0.5}, {0.9, 0.9}};
  m.group_of = {0, 0, 1};
  const auto two = pts_from({{0.3, 0.5}, {0.7, 0.5}, {0.9, 0.9}});
  CHECK(affinity_objective(m, two) == doctest::Approx(0.4));
}

TEST_CASE("brute force affinity") {
  const auto three = pts_from({{0.0, 0.0}, {0.1, 0.0}, {0.9, 0.0}});
  const auto bf = brute_force_affinity(three, 2);
  CHECK(bf.model.group(0) == bf.model.group(1));
  CHECK(bf.model.group(2) != bf.model.group(0));
  CHECK(bf.objective == doctest::Approx(0.1));

  const auto all = pts_from({{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.1}});
  CHECK(brute_force_affinity(all, 3).objective == doctest::Approx(0.0));

  // Collinear triple: the median sits on the middle point.
  const auto line = pts_from({{0.0, 0.5}, {0.2, 0.5}, {0.9, 0.5}, {0.95, 0.95}});
  CHECK(brute_force_affinity(line, 2).objective <= 0.9 + 1e-9);

  Rng rng(1, 1);
  CHECK_THROWS_AS(brute_force_affinity(random_points(rng, 13, 2), 2), GuardError);
}

TEST_CASE("deviation detection") {
  AffinityModel m;
  m.centers = {{0.25, 0.25, 0.25}, {0.75, 0.75, 0.75}};
  m.group_of = {0, 0, 1};
  const auto base = pts_from({{0.2, 0.2, 0.2}, {0.3, 0.3, 0.3}, {0.8, 0.8, 0.8}});
  CHECK(detect_deviations(m, base).empty());

  auto moved = base;
  moved[1].kpis = m.centers[1];
  CHECK(detect_deviations(m, moved) == std::vector<int>{1});

  auto drift = base;
  drift[0].kpis = {0.6, 0.6, 0.6};
  CHECK(euclidean_distance(drift[0].kpis, m.centers[1]) < euclidean_distance(drift[0].kpis, m.centers[0]));
  CHECK(detect_deviations(m, drift) == std::vector<int>{0});

  std::vector<ProfilePoint> unknown{{9, {0.1, 0.1, 0.1}}};
  CHECK_THROWS_AS(detect_deviations(m, unknown), ContractViolation);

  // Dense overload: same answer, model untouched.
  std::vector<KpiVector> dense{{0.6, 0.6, 0.6}, {0.3, 0.3, 0.3}, {0.8, 0.8, 0.8}};
  const auto before = m.group_of;
  CHECK(detect_deviations(m, std::span<const KpiVector>(dense), Exec::parallel) == std::vector<int>{0});
  CHECK(m.group_of == before);
}

TEST_CASE("group count controller") {
  GroupCountController a(2, 16);
  CHECK(a.update(true) == 2);

  GroupCountController b(5, 16);
  CHECK(b.update(false) == 5);
  CHECK(b.update(false) == 6);
  CHECK(b.stable_epochs() == 0);

  GroupCountController c(5, 16);
  c.update(false);
  CHECK(c.update(true) == 4);
  CHECK(c.stable_epochs() == 0);
  CHECK(c.update(false) == 4);

  GroupCountController top(3, 3);
  top.update(false);
  CHECK(top.update(false) == 3);
  CHECK_THROWS_AS(GroupCountController(1, 4), ConfigError);
  CHECK_THROWS_AS(GroupCountController(5, 4), ConfigError);
}
