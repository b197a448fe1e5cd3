#include "sclink/pa.hpp"

#include <cmath>

namespace sclink {

cplx& MemoryPolyParams::at(int k, int l, int m) {
  return coeffs[(static_cast<std::size_t>(k) * (2 * pb - 1) + (l + pb - 1)) * (2 * pc - 1) +
                (m + pc - 1)];
}

const cplx& MemoryPolyParams::at(int k, int l, int m) const {
  return coeffs[(static_cast<std::size_t>(k) * (2 * pb - 1) + (l + pb - 1)) * (2 * pc - 1) +
                (m + pc - 1)];
}

cplx saleh_apply(const SalehParams& p, cplx x) {
  const double r = std::abs(x);
  if (r == 0.0) return {0.0, 0.0};
  const double gain = p.g0 / (1.0 + (r / p.a_sat) * (r / p.a_sat));
  const double theta = p.alpha * r * r / (1.0 + p.beta * r * r);
  return x * std::polar(gain, theta);
}

cvec saleh_apply(const SalehParams& p, const cvec& x) {
  cvec out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = saleh_apply(p, x[n]);
  return out;
}

cvec memory_poly_apply(const MemoryPolyParams& p, const cvec& x) {
  if (p.coeffs.empty() || p.kb <= 0)
    throw std::invalid_argument("memory poly: empty coefficient set");
  if (p.coeffs.size() != static_cast<std::size_t>(p.kb) * (2 * p.pb - 1) * (2 * p.pc - 1))
    throw std::invalid_argument("memory poly: coefficient count mismatch");

  const int n_samp = static_cast<int>(x.size());
  auto sample = [&](int idx) -> cplx {
    return (idx < 0 || idx >= n_samp) ? cplx{0.0, 0.0} : x[idx];
  };

  cvec out(x.size(), cplx{0.0, 0.0});
  for (int k = 0; k < p.kb; ++k) {
    for (int l = 1 - p.pb; l <= p.pb - 1; ++l) {
      for (int m = 1 - p.pc; m <= p.pc - 1; ++m) {
        const cplx c = p.at(k, l, m);
        if (c == cplx{0.0, 0.0}) continue;
        for (int n = 0; n < n_samp; ++n) {
          const cplx xb = sample(n - l);
          if (xb == cplx{0.0, 0.0}) continue;
          const double env2 = std::norm(sample(n - l - m));
          double env_pow = 1.0;
          for (int kk = 0; kk < k; ++kk) env_pow *= env2;
          out[n] += c * xb * env_pow;
        }
      }
    }
  }
  return out;
}

cvec pa_apply(const PaModel& model, const cvec& x) {
  return std::visit(
      [&](const auto& m) -> cvec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearPa>) {
          return x;
        } else if constexpr (std::is_same_v<T, SalehParams>) {
          return saleh_apply(m, x);
        } else {
          return memory_poly_apply(m, x);
        }
      },
      model);
}

ComplexSignal pa_apply(const PaModel& model, const ComplexSignal& x, double input_scale) {
  ComplexSignal out = x;
  if (input_scale != 1.0)
    for (auto& s : out.samples) s *= input_scale;
  out.samples = pa_apply(model, out.samples);
  return out;
}

MemoryPolyParams make_default_memory_poly() {
  MemoryPolyParams p;
  p.kb = 3;
  p.pb = 2;
  p.pc = 2;
  p.coeffs.assign(static_cast<std::size_t>(p.kb) * 3 * 3, cplx{0.0, 0.0});
  // Linear part with short memory.
  p.at(0, -1, 0) = {0.040, 0.020};
  p.at(0, 0, 0) = {1.000, 0.000};
  p.at(0, 1, 0) = {-0.060, 0.030};
  // Cubic compression plus cross-lag envelope terms.
  p.at(1, 0, 0) = {-0.220, -0.100};
  p.at(1, 0, -1) = {0.030, 0.010};
  p.at(1, 0, 1) = {0.020, -0.020};
  p.at(1, -1, 0) = {0.015, 0.010};
  p.at(1, 1, 0) = {-0.020, 0.005};
  // Quintic ripple.
  p.at(2, 0, 0) = {-0.018, 0.006};
  return p;
}

namespace {

double memory_poly_cw_peak(const MemoryPolyParams& p) {
  // CW drive at amplitude A: output amplitude A * |sum_k C_k A^{2k}| with
  // C_k = sum_{l,m} c[k][l][m]. Scan for the first local maximum.
  std::vector<cplx> ck(p.kb, cplx{0.0, 0.0});
  for (int k = 0; k < p.kb; ++k)
    for (int l = 1 - p.pb; l <= p.pb - 1; ++l)
      for (int m = 1 - p.pc; m <= p.pc - 1; ++m) ck[k] += p.at(k, l, m);

  auto out_amp = [&](double a) {
    cplx g{0.0, 0.0};
    double a2k = 1.0;
    for (int k = 0; k < p.kb; ++k) {
      g += ck[k] * a2k;
      a2k *= a * a;
    }
    return a * std::abs(g);
  };

  const double step = 1e-3;
  double best = 0.0;
  int falling = 0;
  for (double a = step; a <= 8.0; a += step) {
    const double v = out_amp(a);
    if (v > best) {
      best = v;
      falling = 0;
    } else if (++falling > 20) {
      return best * best;
    }
  }
  throw std::invalid_argument("memory poly: no finite CW output maximum; cannot define backoff");
}

}  // namespace

double peak_output_power(const PaModel& model) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearPa>) {
          throw std::invalid_argument("backoff unreachable: linear model has no output peak");
        } else if constexpr (std::is_same_v<T, SalehParams>) {
          const double a = m.g0 * m.a_sat / 2.0;
          return a * a;
        } else {
          return memory_poly_cw_peak(m);
        }
      },
      model);
}

InputScaling set_backoff(const cvec& x, const PaModel& model, double target_backoff_db) {
  if (x.empty()) throw std::invalid_argument("set_backoff: empty reference waveform");
  if (std::holds_alternative<LinearPa>(model))
    throw std::invalid_argument("backoff unreachable: output ratio is scale-invariant");

  const double peak = peak_output_power(model);
  const double target_ratio = undb10(-target_backoff_db);

  auto ratio_at = [&](double s) {
    cvec scaled(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) scaled[n] = s * x[n];
    return mean_power(pa_apply(model, scaled)) / peak;
  };

  // Grow the upper bracket along the rising side of the (unimodal) curve.
  const double rms = std::sqrt(mean_power(x));
  double s_lo = 1e-6 / rms;
  double s_hi = 0.1 / rms;
  double r_hi = ratio_at(s_hi);
  double best_ratio = r_hi;
  while (r_hi < target_ratio) {
    const double s_next = s_hi * 1.5;
    const double r_next = ratio_at(s_next);
    if (r_next <= r_hi) {
      // Past the ratio peak and still short of the target.
      throw std::invalid_argument("backoff unreachable: target above the achievable output ratio");
    }
    s_lo = s_hi;
    s_hi = s_next;
    r_hi = r_next;
    best_ratio = std::max(best_ratio, r_hi);
    if (s_hi > 1e9 / rms)
      throw std::invalid_argument("backoff unreachable: bracket search diverged");
  }

  // Bisection on the rising side to 0.01 dB.
  for (int it = 0; it < 200; ++it) {
    const double s_mid = 0.5 * (s_lo + s_hi);
    const double r_mid = ratio_at(s_mid);
    if (std::abs(db10(r_mid) - db10(target_ratio)) < 0.01) {
      return {s_mid, -db10(r_mid)};
    }
    if (r_mid < target_ratio)
      s_lo = s_mid;
    else
      s_hi = s_mid;
  }
  throw std::invalid_argument("backoff search failed to converge to 0.01 dB");
}

}  // namespace sclink
