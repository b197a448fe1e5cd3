#include "sclink/fdebank.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "sclink/fft.hpp"

namespace sclink {

BranchSet split_branches(const ComplexSignal& mf_out, int mu, int n_cp, int block_len) {
  if (mu < 1) throw std::invalid_argument("branch split: mu must be >= 1");
  if (mf_out.samples_per_symbol != mu)
    throw std::invalid_argument("branch split: signal rate does not match mu");
  if (block_len <= 0) throw std::invalid_argument("branch split: empty block");

  BranchSet bs;
  bs.block_len = block_len;
  bs.first_sample = mf_out.origin + n_cp * mu;
  const long long last = static_cast<long long>(bs.first_sample) +
                         static_cast<long long>(block_len - 1) * mu + (mu - 1);
  if (bs.first_sample < 0 || last >= static_cast<long long>(mf_out.samples.size()))
    throw std::invalid_argument("branch split: misaligned block, not enough samples");

  bs.branches.assign(mu, cvec(block_len));
  for (int i = 0; i < mu; ++i)
    for (int n = 0; n < block_len; ++n)
      bs.branches[i][n] = mf_out.samples[bs.first_sample + n * mu + i];
  return bs;
}

cvec interleave_branches(const BranchSet& bs) {
  const int mu = static_cast<int>(bs.branches.size());
  cvec out(static_cast<std::size_t>(mu) * bs.block_len);
  for (int n = 0; n < bs.block_len; ++n)
    for (int i = 0; i < mu; ++i) out[static_cast<std::size_t>(n) * mu + i] = bs.branches[i][n];
  return out;
}

SymbolRateCsi ls_estimate(const cvec& ft_symbols, const cvec& y_fast, int lb, int lf,
                          int n_cp, int n_cs) {
  const int n_ft = static_cast<int>(ft_symbols.size());
  if (lb < 1 || lf < 1) throw std::invalid_argument("ls: tap spans must be >= 1");
  const int n_taps = lb + lf - 1;
  if (n_ft < n_taps) throw std::invalid_argument("ls: training shorter than tap span");
  if (static_cast<int>(y_fast.size()) != n_ft)
    throw std::invalid_argument("ls: observation length must equal training length");

  // Known transmitted indices span [-n_cp, n_ft + n_cs); beyond that, zero.
  auto sym_at = [&](int idx) -> cplx {
    if (idx >= 0 && idx < n_ft) return ft_symbols[idx];
    if (idx < 0 && idx >= -n_cp) return ft_symbols[idx + n_ft];
    if (idx >= n_ft && idx < n_ft + n_cs) return ft_symbols[idx - n_ft];
    return {0.0, 0.0};
  };

  Eigen::MatrixXcd a(n_ft, n_taps);
  for (int k = 0; k < n_ft; ++k)
    for (int l = 0; l < n_taps; ++l) a(k, l) = sym_at(k - l + lb - 1);

  Eigen::VectorXcd y(n_ft);
  for (int k = 0; k < n_ft; ++k) y(k) = y_fast[k];

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  cod.setThreshold(1e-10);
  if (cod.rank() < n_taps) throw std::invalid_argument("ls: rank-deficient training matrix");
  const Eigen::VectorXcd h = cod.solve(y);

  SymbolRateCsi csi;
  csi.lb = lb;
  csi.lf = lf;
  csi.taps.assign(h.data(), h.data() + n_taps);
  return csi;
}

cvec channel_bin_response(const SymbolRateCsi& csi, int n_bins) {
  if (n_bins <= 0) throw std::invalid_argument("bin response: n_bins must be positive");
  cvec padded(n_bins, cplx{0.0, 0.0});
  for (std::size_t idx = 0; idx < csi.taps.size(); ++idx) {
    const int lag = csi.lag_of(static_cast<int>(idx));
    const int pos = ((lag % n_bins) + n_bins) % n_bins;
    padded[pos] += csi.taps[idx];
  }
  return dft_forward_raw(padded);
}

cvec fde_equalize(const cvec& y_branch, const SymbolRateCsi& csi, double delta) {
  if (delta < 0.0) throw std::invalid_argument("fde: negative delta");
  const int n = static_cast<int>(y_branch.size());
  if (n == 0) throw std::invalid_argument("fde: empty block");

  const cvec lambda = channel_bin_response(csi, n);
  cvec yf = dft_forward_unitary(y_branch);
  for (int k = 0; k < n; ++k) {
    const double denom = std::norm(lambda[k]) + delta;
    if (denom == 0.0)
      throw std::invalid_argument("fde: singular bin with zero regularization");
    yf[k] *= std::conj(lambda[k]) / denom;
  }
  return dft_inverse_unitary(yf);
}

}  // namespace sclink
