#pragma once

#include "sclink/types.hpp"

namespace sclink {

// Unitary DFT pair used by the frequency-domain equalizer: forward applies
// (1/sqrt(N)) * sum x_n e^{-j2pi kn/N}, inverse is its adjoint. FFTW under the
// hood, arbitrary N supported. Plan creation is mutex-guarded; execution is
// thread safe.
cvec dft_forward_unitary(const cvec& x);
cvec dft_inverse_unitary(const cvec& x);

// Unnormalized transforms for PSD and convolution work.
cvec dft_forward_raw(const cvec& x);
cvec dft_inverse_raw(const cvec& x);  // carries the 1/N factor

}  // namespace sclink
