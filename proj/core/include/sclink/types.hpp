#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sclink {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

// Complex baseband sample stream. `samples_per_symbol` tags the rate; `origin`
// is the sample index aligned with symbol 0 of the block the stream carries
// (filters shift it by their group delay).
struct ComplexSignal {
  cvec samples;
  int samples_per_symbol = 1;
  int origin = 0;
};

// Block geometry in symbols: payload, cyclic prefix/suffix, fast-time training
// length and slow-time training length.
struct FrameLayout {
  int n_data = 0;
  int n_cp = 0;
  int n_cs = 0;
  int n_ft = 0;
  int n_st = 0;
};

inline void validate(const FrameLayout& f) {
  if (f.n_data <= 0) throw std::invalid_argument("frame: n_data must be positive");
  if (f.n_cp < 0 || f.n_cs < 0) throw std::invalid_argument("frame: negative guard length");
  if (f.n_cp > f.n_data || f.n_cs > f.n_data)
    throw std::invalid_argument("frame: guard longer than payload block");
  if (f.n_ft > 0 && (f.n_cp > f.n_ft || f.n_cs > f.n_ft))
    throw std::invalid_argument("frame: guard longer than fast-time training block");
}

inline double db10(double x) { return 10.0 * std::log10(x); }
inline double undb10(double x) { return std::pow(10.0, x / 10.0); }

inline double mean_power(const cvec& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (const cplx& s : v) acc += std::norm(s);
  return acc / static_cast<double>(v.size());
}

}  // namespace sclink
