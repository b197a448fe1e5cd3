#include "sclink/rng.hpp"

#include <cmath>

namespace sclink {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b ^ 0x5851f42d4c957f2dULL));
  h = splitmix64(h ^ splitmix64(c ^ 0x14057b7ef767814fULL));
  return h;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

cplx Rng::cgaussian(double var) {
  const double s = std::sqrt(var / 2.0);
  return {s * gaussian(), s * gaussian()};
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  // Rejection sampling for an unbiased draw.
  const std::uint64_t limit = bound * ((~0ULL) / bound);
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % bound;
}

cvec Rng::cgaussian_vector(std::size_t n, double var) {
  cvec out(n);
  for (auto& s : out) s = cgaussian(var);
  return out;
}

}  // namespace sclink
