#include "sclink/channel.hpp"

#include <cmath>

#include "sclink/dsp.hpp"

namespace sclink {

ChannelProfile channel_profile_from_string(const std::string& s) {
  if (s == "awgn") return ChannelProfile::kAwgn;
  if (s == "symbol_sparse") return ChannelProfile::kSymbolSparse;
  if (s == "dense_exponential") return ChannelProfile::kDenseExponential;
  throw std::invalid_argument("unknown channel profile: " + s);
}

std::string to_string(ChannelProfile profile) {
  switch (profile) {
    case ChannelProfile::kAwgn: return "awgn";
    case ChannelProfile::kSymbolSparse: return "symbol_sparse";
    case ChannelProfile::kDenseExponential: return "dense_exponential";
  }
  return "?";
}

ChannelRealization draw_channel(ChannelProfile profile, int span_symbols, int upsampling,
                                std::uint64_t seed) {
  if (span_symbols <= 0) throw std::invalid_argument("channel: span must be positive");
  if (upsampling < 1) throw std::invalid_argument("channel: upsampling must be >= 1");

  ChannelRealization ch;
  ch.samples_per_symbol = upsampling;
  Rng rng(seed);

  if (profile == ChannelProfile::kAwgn) {
    ch.taps = {cplx{1.0, 0.0}};
    return ch;
  }

  const double tau_rms = span_symbols / 4.0;  // in symbol periods
  if (profile == ChannelProfile::kSymbolSparse) {
    ch.taps.assign(static_cast<std::size_t>(span_symbols - 1) * upsampling + 1, cplx{0.0, 0.0});
    for (int l = 0; l < span_symbols; ++l) {
      const double var = std::exp(-static_cast<double>(l) / tau_rms);
      ch.taps[static_cast<std::size_t>(l) * upsampling] = rng.cgaussian(var);
    }
  } else {
    ch.taps.resize(static_cast<std::size_t>(span_symbols) * upsampling);
    for (std::size_t k = 0; k < ch.taps.size(); ++k) {
      const double delay_sym = static_cast<double>(k) / upsampling;
      ch.taps[k] = rng.cgaussian(std::exp(-delay_sym / tau_rms));
    }
  }

  double power = 0.0;
  for (const cplx& t : ch.taps) power += std::norm(t);
  const double inv = 1.0 / std::sqrt(power);
  for (cplx& t : ch.taps) t *= inv;
  return ch;
}

ComplexSignal propagate(const ComplexSignal& x, const ChannelRealization& ch,
                        const NoiseSpec& noise) {
  if (ch.taps.empty()) throw std::invalid_argument("propagate: empty channel");
  if (ch.samples_per_symbol != x.samples_per_symbol)
    throw std::invalid_argument("propagate: rate mismatch between signal and channel");

  ComplexSignal out;
  out.samples_per_symbol = x.samples_per_symbol;
  out.origin = x.origin;  // lag-0 tap carries the nominal timing
  out.samples = convolve(x.samples, ch.taps);
  if (noise.n0 > 0.0) {
    Rng rng(noise.seed);
    for (auto& s : out.samples) s += rng.cgaussian(noise.n0);
  }
  return out;
}

ComplexSignal matched_filter(const ComplexSignal& x, const PulseShape& pulse) {
  if (x.samples_per_symbol != pulse.upsampling)
    throw std::invalid_argument("matched filter: rate mismatch");
  std::vector<double> rev(pulse.taps.rbegin(), pulse.taps.rend());
  ComplexSignal out;
  out.samples_per_symbol = x.samples_per_symbol;
  out.samples = convolve(x.samples, rev);
  out.origin = x.origin + pulse.center();
  return out;
}

}  // namespace sclink
