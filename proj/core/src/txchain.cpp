#include "sclink/txchain.hpp"

#include <cmath>

#include "sclink/dsp.hpp"

namespace sclink {

cvec convolve(const cvec& a, const cvec& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolve: empty input");
  cvec out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx ai = a[i];
    if (ai == cplx{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

PulseShape design_rrc(double rolloff, int span_symbols, int upsampling) {
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("rrc: rolloff outside [0, 1]");
  if (span_symbols <= 0 || span_symbols % 2 != 0)
    throw std::invalid_argument("rrc: span must be positive and even");
  if (upsampling < 1) throw std::invalid_argument("rrc: upsampling must be >= 1");

  PulseShape p;
  p.upsampling = upsampling;
  p.rolloff = rolloff;
  const int half = span_symbols * upsampling / 2;
  p.taps.resize(2 * half + 1);

  const double b = rolloff;
  for (int k = -half; k <= half; ++k) {
    const double t = static_cast<double>(k) / upsampling;  // in symbol periods
    double v;
    if (std::abs(t) < 1e-12) {
      v = (b == 0.0) ? 1.0 : 1.0 + b * (4.0 / kPi - 1.0);
    } else if (b > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-9) {
      const double x = kPi / (4.0 * b);
      v = (b / std::sqrt(2.0)) *
          ((1.0 + 2.0 / kPi) * std::sin(x) + (1.0 - 2.0 / kPi) * std::cos(x));
    } else if (b == 0.0) {
      v = std::sin(kPi * t) / (kPi * t);
    } else {
      const double num = std::sin(kPi * t * (1.0 - b)) +
                         4.0 * b * t * std::cos(kPi * t * (1.0 + b));
      const double den = kPi * t * (1.0 - std::pow(4.0 * b * t, 2.0));
      v = num / den;
    }
    p.taps[k + half] = v;
  }

  double energy = 0.0;
  for (double tap : p.taps) energy += tap * tap;
  const double inv = 1.0 / std::sqrt(energy);
  for (double& tap : p.taps) tap *= inv;
  return p;
}

cvec add_cyclic_extension(const cvec& block, int n_cp, int n_cs) {
  const int n = static_cast<int>(block.size());
  if (n == 0) throw std::invalid_argument("cyclic extension: empty block");
  if (n_cp < 0 || n_cs < 0) throw std::invalid_argument("cyclic extension: negative guard");
  if (n_cp > n || n_cs > n)
    throw std::invalid_argument("cyclic extension: guard longer than block");
  cvec out;
  out.reserve(block.size() + n_cp + n_cs);
  out.insert(out.end(), block.end() - n_cp, block.end());
  out.insert(out.end(), block.begin(), block.end());
  out.insert(out.end(), block.begin(), block.begin() + n_cs);
  return out;
}

ComplexSignal shape(const cvec& symbols, const PulseShape& pulse) {
  if (symbols.empty()) throw std::invalid_argument("shape: empty symbol block");
  const int mu = pulse.upsampling;
  cvec up((symbols.size() - 1) * mu + 1, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < symbols.size(); ++k) up[k * mu] = symbols[k];

  ComplexSignal out;
  out.samples = convolve(up, pulse.taps);
  out.samples_per_symbol = mu;
  out.origin = pulse.center();
  return out;
}

}  // namespace sclink
