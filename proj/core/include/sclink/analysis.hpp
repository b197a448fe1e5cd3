#pragma once

#include <vector>

#include "sclink/channel.hpp"
#include "sclink/pa.hpp"
#include "sclink/qam.hpp"
#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

namespace sclink {

// Minimum-mean-square linear split x~ = alpha * x + gamma with sample-estimated
// alpha = <x, x~> / <x, x>; the residual is orthogonal to x by construction.
struct BussgangSplit {
  cplx alpha{1.0, 0.0};
  cvec gamma;
  double residual_correlation = 0.0;  // |sum x* gamma| / sum |x|^2
};

// Requires equal lengths >= 1000 samples and nonzero reference power.
BussgangSplit bussgang_decompose(const cvec& x, const cvec& x_nl);

// Welch estimate: 50% overlap, Hann window, fftshifted grid on [-pi, pi).
// Normalized so that the mean of `psd` equals the signal power.
struct SpectrumEstimate {
  std::vector<double> freq;
  std::vector<double> psd;
};

SpectrumEstimate estimate_psd(const cvec& x, int segment_len);

// Symbol-rate end-to-end response per polyphase branch d in [0, mu):
//   H^(d)(w) = (alpha/mu) * sum_i H(nu_i) |P(nu_i)|^2 e^{j nu_i d},
// nu_i = (w - 2 pi i)/mu, evaluated on the n_bins grid w_k = 2 pi k / n_bins.
struct EffectiveChannel {
  std::vector<cvec> response;  // [branch][bin]
  int n_bins = 0;
};

EffectiveChannel effective_channel(const ChannelRealization& ch, const PulseShape& pulse,
                                   int mu, cplx alpha, int n_bins);

// Propagates the scaled-linear part and the distortion residual of a PA output
// separately through the same noiseless channel + matched filter, then reports
// per-branch symbol-rate Welch spectra of both.
struct DistortionSpectrum {
  std::vector<double> freq;
  std::vector<std::vector<double>> psd_linear;      // [branch][bin]
  std::vector<std::vector<double>> psd_distortion;  // [branch][bin]
  cplx alpha{0.0, 0.0};
};

DistortionSpectrum distortion_spectrum_report(const cvec& symbols, const PulseShape& pulse,
                                              const PaModel& pa, double input_scale,
                                              const ChannelRealization& ch, int n_cp, int n_cs,
                                              int welch_segment);

// Scores dependence of post-correction residuals e_m on the neighboring symbol
// identity at each lag: normalized between-bin variance of E[e_m | a_{m-k}].
// Bins are constellation points for order <= 64, else 16 amplitude rings.
struct IsiProbeReport {
  std::vector<int> lags;
  std::vector<double> scores;
};

IsiProbeReport nonlinear_isi_probe(const cvec& residuals, const std::vector<int>& point_ids,
                                   const QamAlphabet& alphabet, int max_lag);

}  // namespace sclink
