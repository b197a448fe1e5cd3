#pragma once

#include <variant>
#include <vector>

#include "sclink/types.hpp"

namespace sclink {

struct LinearPa {};

// Envelope nonlinearity: gain g0*r/(1 + (r/a_sat)^2), phase rotation
// alpha*r^2/(1 + beta*r^2) radians at input modulus r.
struct SalehParams {
  double g0 = 2.0;
  double a_sat = 1.0;
  double alpha = 2.0;
  double beta = 1.0;
};

// x~_n = sum_{k=0}^{kb-1} sum_{l=1-pb}^{pb-1} sum_{m=1-pc}^{pc-1}
//          c[k][l][m] * x_{n-l} * |x_{n-l-m}|^{2k},  zero-padded at the edges.
struct MemoryPolyParams {
  int kb = 0;  // number of odd-order terms (k = 0 is linear)
  int pb = 1;  // branch lag extent, l in [1-pb, pb-1]
  int pc = 1;  // cross lag extent, m in [1-pc, pc-1]
  cvec coeffs; // flattened [k][l+pb-1][m+pc-1]

  cplx& at(int k, int l, int m);
  const cplx& at(int k, int l, int m) const;
};

using PaModel = std::variant<LinearPa, SalehParams, MemoryPolyParams>;

cplx saleh_apply(const SalehParams& p, cplx x);
cvec saleh_apply(const SalehParams& p, const cvec& x);

cvec memory_poly_apply(const MemoryPolyParams& p, const cvec& x);

cvec pa_apply(const PaModel& model, const cvec& x);
ComplexSignal pa_apply(const PaModel& model, const ComplexSignal& x, double input_scale = 1.0);

// Synthetic wideband-amplifier coefficient set (kb=3, pb=2, pc=2): mild linear
// memory, compressive cubic with cross terms, small quintic. Saturates near
// CW amplitude 1.24 with peak output power 0.697.
MemoryPolyParams make_default_memory_poly();

// Peak instantaneous output power under a constant-envelope sweep. For the
// memory polynomial this is the first local maximum of the CW AM/AM curve on a
// dense amplitude grid; a model with no finite maximum is rejected.
double peak_output_power(const PaModel& model);

struct InputScaling {
  double scale = 1.0;
  double backoff_db = 0.0;  // achieved 10*log10(peak / average) at the output
};

// Finds the input scale making the average output power sit `target_backoff_db`
// below the peak output power, by bisection to 0.01 dB. The waveform `x` is the
// reference statistics carrier. Unreachable targets (including any scale-free
// model) are rejected.
InputScaling set_backoff(const cvec& x, const PaModel& model, double target_backoff_db);

}  // namespace sclink
