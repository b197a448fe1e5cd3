#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sclink/fft.hpp"
#include "sclink/rng.hpp"

using namespace sclink;

namespace {

double linf(const cvec& a, const cvec& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double norm2(const cvec& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("round trip restores the input for awkward lengths too") {
  Rng rng(3);
  for (int n : {1, 2, 3, 5, 16, 100, 257, 512, 1000, 3000}) {
    const cvec x = rng.cgaussian_vector(n, 1.0);
    CHECK(linf(dft_inverse_unitary(dft_forward_unitary(x)), x) < 1e-12);
    CHECK(linf(dft_inverse_raw(dft_forward_raw(x)), x) < 1e-12);
  }
}

TEST_CASE("forward transform preserves the two-norm") {
  Rng rng(5);
  for (int n : {4, 37, 512, 3000}) {
    const cvec x = rng.cgaussian_vector(n, 2.0);
    CHECK(norm2(dft_forward_unitary(x)) == doctest::Approx(norm2(x)).epsilon(1e-12));
    CHECK(norm2(dft_inverse_unitary(x)) == doctest::Approx(norm2(x)).epsilon(1e-12));
  }
}

TEST_CASE("matches a direct quadratic-time transform") {
  Rng rng(7);
  const int n = 64;
  const cvec x = rng.cgaussian_vector(n, 1.0);
  cvec want(n, cplx{0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      const double ang = -2.0 * kPi * k * m / n;
      want[k] += x[m] * cplx{std::cos(ang), std::sin(ang)};
    }
    want[k] /= std::sqrt(static_cast<double>(n));
  }
  CHECK(linf(dft_forward_unitary(x), want) < 1e-9);

  const cvec raw = dft_forward_raw(x);
  for (int k = 0; k < n; ++k) {
    CHECK(std::abs(raw[k] - want[k] * std::sqrt(static_cast<double>(n))) < 1e-9);
  }
}

TEST_CASE("unit impulse maps to a flat spectrum") {
  cvec x(32, cplx{0.0, 0.0});
  x[0] = 1.0;
  const auto s = dft_forward_unitary(x);
  for (const auto& v : s) CHECK(std::abs(v - 1.0 / std::sqrt(32.0)) < 1e-13);
}

TEST_CASE("transforming a basis tone places a single bin") {
  const int n = 48, tone = 7;
  cvec x(n);
  for (int m = 0; m < n; ++m) {
    const double ang = 2.0 * kPi * tone * m / n;
    x[m] = cplx{std::cos(ang), std::sin(ang)};
  }
  const auto s = dft_forward_unitary(x);
  for (int k = 0; k < n; ++k) {
    if (k == tone) {
      CHECK(std::abs(s[k]) == doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-12));
    } else {
      CHECK(std::abs(s[k]) < 1e-11);
    }
  }
}
