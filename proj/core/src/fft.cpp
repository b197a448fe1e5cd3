#include "sclink/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace sclink {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
  static std::map<std::size_t, PlanPair> cache;
  return cache;
}

// Plans are created once per size against scratch buffers and reused with the
// new-array interface; FFTW_UNALIGNED keeps that valid for any caller buffer.
PlanPair& plans_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Plan out-of-place: run() always executes with distinct buffers, and the
  // new-array interface requires the same placement as the original plan.
  fftw_complex* s_in = fftw_alloc_complex(n);
  fftw_complex* s_out = fftw_alloc_complex(n);
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), s_in, s_out, FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), s_in, s_out, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(s_in);
  fftw_free(s_out);
  return cache.emplace(n, p).first->second;
}

cvec run(const cvec& x, bool forward) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  cvec out(x.size());
  PlanPair& p = plans_for(x.size());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(x.data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(forward ? p.fwd : p.bwd, in_ptr, out_ptr);
  return out;
}

}  // namespace

cvec dft_forward_raw(const cvec& x) { return run(x, true); }

cvec dft_inverse_raw(const cvec& x) {
  cvec out = run(x, false);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

cvec dft_forward_unitary(const cvec& x) {
  cvec out = run(x, true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : out) v *= scale;
  return out;
}

cvec dft_inverse_unitary(const cvec& x) {
  cvec out = run(x, false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace sclink
