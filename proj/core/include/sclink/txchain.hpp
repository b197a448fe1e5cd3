#pragma once

#include <vector>

#include "sclink/qam.hpp"
#include "sclink/types.hpp"

namespace sclink {

// Root-raised-cosine taps at `upsampling` samples per symbol, odd length
// (span_symbols * upsampling + 1), symmetric, normalized to unit energy.
struct PulseShape {
  std::vector<double> taps;
  int upsampling = 1;
  double rolloff = 0.0;
  int center() const { return static_cast<int>(taps.size() - 1) / 2; }
};

// rolloff in [0, 1]; span_symbols must be positive and even.
PulseShape design_rrc(double rolloff, int span_symbols, int upsampling);

// [last n_cp | block | first n_cs]; lengths are validated against the block.
cvec add_cyclic_extension(const cvec& block, int n_cp, int n_cs);

// x_n = sum_k a_k p_{n - upsampling*k}: zero-stuffed upsampling followed by the
// pulse filter. `origin` of the result marks the peak of symbol 0.
ComplexSignal shape(const cvec& symbols, const PulseShape& pulse);

}  // namespace sclink
