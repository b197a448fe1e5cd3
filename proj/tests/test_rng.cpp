#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sclink/rng.hpp"

using namespace sclink;

TEST_CASE("derived seeds are stable and decorrelated") {
  const auto s1 = derive_seed(42, "data-noise", 0, 3);
  CHECK(s1 == derive_seed(42, "data-noise", 0, 3));
  CHECK(s1 != derive_seed(42, "data-noise", 0, 4));
  CHECK(s1 != derive_seed(42, "data-noise", 1, 3));
  CHECK(s1 != derive_seed(42, "ft-noise", 0, 3));
  CHECK(s1 != derive_seed(43, "data-noise", 0, 3));

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(derive_seed(7, "channel", i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.gaussian() == b.gaussian());
    CHECK(a.cgaussian(2.0) == b.cgaussian(2.0));
    CHECK(a.integer(97) == b.integer(97));
  }
  Rng c(124);
  int same = 0;
  Rng a2(123);
  for (int i = 0; i < 100; ++i) same += (a2.uniform() == c.uniform());
  CHECK(same < 5);
}

TEST_CASE("uniform stays in the half-open unit interval") {
  Rng r(5);
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Rng r(9);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.gaussian();
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("complex gaussian variance splits evenly") {
  Rng r(11);
  const int n = 100000;
  double pr = 0.0, pi = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx z = r.cgaussian(4.0);
    pr += z.real() * z.real();
    pi += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  CHECK(pr / n == doctest::Approx(2.0).epsilon(0.03));
  CHECK(pi / n == doctest::Approx(2.0).epsilon(0.03));
  CHECK(std::abs(cross / n) < 0.05);
}

TEST_CASE("bounded integers cover the range uniformly") {
  Rng r(13);
  std::vector<int> counts(8, 0);
  for (int i = 0; i < 80000; ++i) {
    const auto v = r.integer(8);
    REQUIRE(v < 8);
    ++counts[static_cast<int>(v)];
  }
  for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.06));
}

TEST_CASE("vector draw matches element draw") {
  Rng a(21), b(21);
  const cvec v = a.cgaussian_vector(64, 3.0);
  REQUIRE(v.size() == 64);
  for (int i = 0; i < 64; ++i) CHECK(v[i] == b.cgaussian(3.0));
}
