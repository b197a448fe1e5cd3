#pragma once

#include <vector>

#include "sclink/types.hpp"

namespace sclink {

// Symbol-rate polyphase branches of a matched-filter output: branch i of mu
// holds y^(i)_n = y[origin + (n_cp + n)*mu + (i-1)] for n in [0, block_len),
// i.e. the guard spans are already discarded.
struct BranchSet {
  std::vector<cvec> branches;
  int block_len = 0;
  int first_sample = 0;  // sample index of branch 1, symbol 0 in the source
};

BranchSet split_branches(const ComplexSignal& mf_out, int mu, int n_cp, int block_len);

// Re-interleaves the branch streams into the contiguous sample-rate block.
cvec interleave_branches(const BranchSet& bs);

// One branch's least-squares symbol-rate channel estimate, taps at lags
// [1-lb, lf-1] (anticausal to causal).
struct SymbolRateCsi {
  cvec taps;
  int lb = 1;
  int lf = 1;
  int lag_of(int idx) const { return idx - (lb - 1); }
};

// Solves y ~= A h over the fast-time training block. Row k of A carries the
// transmitted symbols a_{k-l+lb-1} with indices cyclically extended by the
// n_cp/n_cs guards the FT block was sent with (the received block is circular
// in exactly that range), zero beyond.
SymbolRateCsi ls_estimate(const cvec& ft_symbols, const cvec& y_fast, int lb, int lf,
                          int n_cp, int n_cs);

// Per-bin response of the CSI taps on an n_bins grid: lambda_k =
// sum_l h_l e^{-j 2 pi k l / n_bins} with anticausal lags wrapped mod n_bins.
// This is the one place that fixes the transform scaling convention.
cvec channel_bin_response(const SymbolRateCsi& csi, int n_bins);

// MMSE frequency-domain equalizer: unitary DFT, per-bin filter
// lambda_k^* / (|lambda_k|^2 + delta), unitary inverse DFT. delta = N0/Es; with
// delta = 0 a vanishing bin is rejected as singular.
cvec fde_equalize(const cvec& y_branch, const SymbolRateCsi& csi, double delta);

}  // namespace sclink
