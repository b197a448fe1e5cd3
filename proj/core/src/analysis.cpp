#include "sclink/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "sclink/fdebank.hpp"
#include "sclink/fft.hpp"

namespace sclink {

BussgangSplit bussgang_decompose(const cvec& x, const cvec& x_nl) {
  if (x.size() != x_nl.size())
    throw std::invalid_argument("bussgang: length mismatch");
  if (x.size() < 1000)
    throw std::invalid_argument("bussgang: need at least 1000 samples");

  cplx cross{0.0, 0.0};
  double power = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    cross += std::conj(x[n]) * x_nl[n];
    power += std::norm(x[n]);
  }
  if (power == 0.0) throw std::invalid_argument("bussgang: zero reference power");

  BussgangSplit out;
  out.alpha = cross / power;
  out.gamma.resize(x.size());
  cplx resid{0.0, 0.0};
  for (std::size_t n = 0; n < x.size(); ++n) {
    out.gamma[n] = x_nl[n] - out.alpha * x[n];
    resid += std::conj(x[n]) * out.gamma[n];
  }
  out.residual_correlation = std::abs(resid) / power;
  return out;
}

SpectrumEstimate estimate_psd(const cvec& x, int segment_len) {
  const int n = static_cast<int>(x.size());
  if (segment_len < 8) throw std::invalid_argument("psd: segment too short");
  if (n < segment_len) throw std::invalid_argument("psd: signal shorter than one segment");

  std::vector<double> window(segment_len);
  double wsum2 = 0.0;
  for (int i = 0; i < segment_len; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / segment_len));
    wsum2 += window[i] * window[i];
  }

  const int hop = segment_len / 2;
  std::vector<double> acc(segment_len, 0.0);
  int n_seg = 0;
  cvec seg(segment_len);
  for (int start = 0; start + segment_len <= n; start += hop) {
    for (int i = 0; i < segment_len; ++i) seg[i] = x[start + i] * window[i];
    const cvec sf = dft_forward_raw(seg);
    for (int k = 0; k < segment_len; ++k) acc[k] += std::norm(sf[k]);
    ++n_seg;
  }

  SpectrumEstimate est;
  est.freq.resize(segment_len);
  est.psd.resize(segment_len);
  const double scale = 1.0 / (wsum2 * segment_len * n_seg);
  // fftshift so the grid runs over [-pi, pi).
  const int half = segment_len / 2;
  for (int k = 0; k < segment_len; ++k) {
    const int src = (k + half) % segment_len;
    est.freq[k] = 2.0 * kPi * (k - half) / segment_len;
    est.psd[k] = acc[src] * scale * segment_len;
  }
  return est;
}

EffectiveChannel effective_channel(const ChannelRealization& ch, const PulseShape& pulse,
                                   int mu, cplx alpha, int n_bins) {
  if (mu < 1) throw std::invalid_argument("effective channel: mu must be >= 1");
  if (n_bins <= 0) throw std::invalid_argument("effective channel: n_bins must be positive");
  if (ch.samples_per_symbol != mu || pulse.upsampling != mu)
    throw std::invalid_argument("effective channel: rate mismatch");

  auto chan_at = [&](double nu) {
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < ch.taps.size(); ++l)
      acc += ch.taps[l] * std::polar(1.0, -nu * static_cast<double>(l));
    return acc;
  };
  auto pulse_mag2_at = [&](double nu) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < pulse.taps.size(); ++m)
      acc += pulse.taps[m] * std::polar(1.0, -nu * static_cast<double>(m));
    return std::norm(acc);
  };

  EffectiveChannel eff;
  eff.n_bins = n_bins;
  eff.response.assign(mu, cvec(n_bins, cplx{0.0, 0.0}));
  for (int k = 0; k < n_bins; ++k) {
    const double w = 2.0 * kPi * k / n_bins;
    for (int i = 0; i < mu; ++i) {
      const double nu = (w - 2.0 * kPi * i) / mu;
      const cplx alias = chan_at(nu) * pulse_mag2_at(nu);
      for (int d = 0; d < mu; ++d)
        eff.response[d][k] += alias * std::polar(1.0, nu * d);
    }
  }
  const cplx gain = alpha / static_cast<double>(mu);
  for (int d = 0; d < mu; ++d)
    for (int k = 0; k < n_bins; ++k) eff.response[d][k] *= gain;
  return eff;
}

DistortionSpectrum distortion_spectrum_report(const cvec& symbols, const PulseShape& pulse,
                                              const PaModel& pa, double input_scale,
                                              const ChannelRealization& ch, int n_cp, int n_cs,
                                              int welch_segment) {
  const int n_data = static_cast<int>(symbols.size());
  const int mu = pulse.upsampling;

  const cvec extended = add_cyclic_extension(symbols, n_cp, n_cs);
  ComplexSignal x = shape(extended, pulse);
  for (auto& s : x.samples) s *= input_scale;
  const cvec x_nl = pa_apply(pa, x.samples);

  const BussgangSplit split = bussgang_decompose(x.samples, x_nl);

  ComplexSignal lin = x;
  for (auto& s : lin.samples) s *= split.alpha;
  ComplexSignal dist = x;
  dist.samples = split.gamma;

  const NoiseSpec quiet{0.0, 0};
  const ComplexSignal lin_rx = matched_filter(propagate(lin, ch, quiet), pulse);
  const ComplexSignal dist_rx = matched_filter(propagate(dist, ch, quiet), pulse);

  const BranchSet lin_b = split_branches(lin_rx, mu, n_cp, n_data);
  const BranchSet dist_b = split_branches(dist_rx, mu, n_cp, n_data);

  DistortionSpectrum rep;
  rep.alpha = split.alpha;
  rep.psd_linear.resize(mu);
  rep.psd_distortion.resize(mu);
  for (int i = 0; i < mu; ++i) {
    SpectrumEstimate sl = estimate_psd(lin_b.branches[i], welch_segment);
    SpectrumEstimate sd = estimate_psd(dist_b.branches[i], welch_segment);
    if (i == 0) rep.freq = sl.freq;
    rep.psd_linear[i] = std::move(sl.psd);
    rep.psd_distortion[i] = std::move(sd.psd);
  }
  return rep;
}

IsiProbeReport nonlinear_isi_probe(const cvec& residuals, const std::vector<int>& point_ids,
                                   const QamAlphabet& alphabet, int max_lag) {
  const int n = static_cast<int>(residuals.size());
  if (n == 0 || residuals.size() != point_ids.size())
    throw std::invalid_argument("isi probe: length mismatch");
  if (max_lag < 1) throw std::invalid_argument("isi probe: max_lag must be >= 1");

  // Bin assignment per symbol: point identity for small alphabets, amplitude
  // ring quantile otherwise.
  int n_bins;
  std::vector<int> bin_of_point;
  if (alphabet.order <= 64) {
    n_bins = alphabet.order;
    bin_of_point.resize(alphabet.order);
    for (int i = 0; i < alphabet.order; ++i) bin_of_point[i] = i;
  } else {
    std::vector<int> ring_of_point;
    const std::vector<double> rings = amplitude_rings(alphabet, &ring_of_point);
    n_bins = 16;
    bin_of_point.resize(alphabet.order);
    const double per = static_cast<double>(rings.size()) / n_bins;
    for (int i = 0; i < alphabet.order; ++i)
      bin_of_point[i] = std::min(n_bins - 1, static_cast<int>(ring_of_point[i] / per));
  }

  cplx grand{0.0, 0.0};
  for (const cplx& e : residuals) grand += e;
  grand /= static_cast<double>(n);
  double var = 0.0;
  for (const cplx& e : residuals) var += std::norm(e - grand);
  var /= static_cast<double>(n);
  if (var == 0.0) throw std::invalid_argument("isi probe: residuals have zero variance");

  IsiProbeReport rep;
  for (int k = -max_lag; k <= max_lag; ++k) rep.lags.push_back(k);
  rep.scores.resize(rep.lags.size(), 0.0);

  std::vector<cplx> mean(n_bins);
  std::vector<int> count(n_bins);
  for (std::size_t li = 0; li < rep.lags.size(); ++li) {
    const int k = rep.lags[li];
    std::fill(mean.begin(), mean.end(), cplx{0.0, 0.0});
    std::fill(count.begin(), count.end(), 0);
    for (int m = 0; m < n; ++m) {
      const int j = m - k;
      if (j < 0 || j >= n) continue;
      const int b = bin_of_point[point_ids[j]];
      mean[b] += residuals[m];
      ++count[b];
    }
    double between = 0.0;
    int used = 0;
    for (int b = 0; b < n_bins; ++b) {
      if (count[b] == 0) continue;
      if (count[b] < 10)
        throw std::invalid_argument("isi probe: under 10 samples in a conditioning bin");
      const cplx mu_b = mean[b] / static_cast<double>(count[b]);
      between += count[b] * std::norm(mu_b - grand);
      used += count[b];
    }
    rep.scores[li] = between / (var * used);
  }
  return rep;
}

}  // namespace sclink
