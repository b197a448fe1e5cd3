#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "sclink/qam.hpp"
#include "sclink/rng.hpp"

using namespace sclink;

TEST_CASE("only square orders with known sizes are accepted") {
  CHECK_THROWS(make_qam(8));
  CHECK_THROWS(make_qam(32));
  CHECK_THROWS(make_qam(2048));
  for (int order : {4, 16, 64, 256, 1024}) {
    const auto q = make_qam(order);
    CHECK(q.order == order);
    CHECK(q.side * q.side == order);
    CHECK((1 << q.bits_per_symbol) == order);
  }
}

TEST_CASE("constellations have unit average energy") {
  for (int order : {4, 16, 64, 256, 1024}) {
    const auto q = make_qam(order);
    double e = 0.0;
    for (const auto& p : q.points) e += std::norm(p);
    CHECK(e / order == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("minimum distance follows from the energy normalization") {
  // 2 * sqrt(3 / (2 (P - 1))) for a unit-energy square grid
  for (int order : {4, 16, 64, 256, 1024}) {
    const auto q = make_qam(order);
    CHECK(q.min_distance ==
          doctest::Approx(2.0 * std::sqrt(3.0 / (2.0 * (order - 1)))).epsilon(1e-12));
    double best = 1e30;
    for (int a = 0; a < order; ++a)
      for (int b = a + 1; b < order; ++b)
        best = std::min(best, std::abs(q.points[a] - q.points[b]));
    CHECK(best == doctest::Approx(q.min_distance).epsilon(1e-9));
  }
}

TEST_CASE("all-zero bits land on the positive corner") {
  const auto q = make_qam(4);
  const auto ids = map_bits(q, {0, 0});
  REQUIRE(ids.size() == 1);
  const cplx p = q.points[ids[0]];
  CHECK(p.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(p.imag() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("labels are a permutation and neighbors differ in one bit") {
  for (int order : {4, 16, 64, 256}) {
    const auto q = make_qam(order);
    std::set<std::uint32_t> labels(q.labels.begin(), q.labels.end());
    CHECK(labels.size() == static_cast<std::size_t>(order));
    CHECK(*labels.rbegin() == static_cast<std::uint32_t>(order - 1));
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        if (a == b) continue;
        if (std::abs(q.points[a] - q.points[b]) < q.min_distance * 1.0001) {
          CHECK(std::popcount(q.labels[a] ^ q.labels[b]) == 1);
        }
      }
    }
  }
}

TEST_CASE("bit mapping round-trips") {
  Rng rng(31);
  const auto q = make_qam(64);
  std::vector<std::uint8_t> bits(6 * 500);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.integer(2));
  const auto ids = map_bits(q, bits);
  REQUIRE(ids.size() == 500);
  CHECK(unmap_points(q, ids) == bits);
  CHECK_THROWS(map_bits(q, std::vector<std::uint8_t>(7, 0)));
  CHECK_THROWS(unmap_points(q, {-1}));
  CHECK_THROWS(unmap_points(q, {64}));
}

TEST_CASE("points_of picks the right coordinates") {
  const auto q = make_qam(16);
  const auto pts = points_of(q, {0, 5, 15});
  CHECK(pts[0] == q.points[0]);
  CHECK(pts[1] == q.points[5]);
  CHECK(pts[2] == q.points[15]);
  CHECK_THROWS(points_of(q, {16}));
}

TEST_CASE("amplitude rings are sorted and consistent") {
  for (int order : {4, 16, 64}) {
    const auto q = make_qam(order);
    std::vector<int> ring_of;
    const auto rings = amplitude_rings(q, &ring_of);
    REQUIRE(ring_of.size() == static_cast<std::size_t>(order));
    for (std::size_t i = 1; i < rings.size(); ++i) CHECK(rings[i] > rings[i - 1]);
    for (int id = 0; id < order; ++id) {
      CHECK(std::abs(q.points[id]) == doctest::Approx(rings[ring_of[id]]).epsilon(1e-12));
    }
  }
  // equal-modulus corners collapse onto one ring
  const auto q4 = make_qam(4);
  CHECK(amplitude_rings(q4).size() == 1);
  CHECK(amplitude_rings(make_qam(16)).size() == 3);
}
