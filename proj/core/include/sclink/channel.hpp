#pragma once

#include <cstdint>
#include <string>

#include "sclink/rng.hpp"
#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

namespace sclink {

enum class ChannelProfile {
  kAwgn,              // single unit tap
  kSymbolSparse,      // Rayleigh taps on the symbol grid only
  kDenseExponential,  // Rayleigh taps on every sample
};

ChannelProfile channel_profile_from_string(const std::string& s);
std::string to_string(ChannelProfile profile);

// Sample-rate FIR taps, normalized to unit total power.
struct ChannelRealization {
  cvec taps;
  int samples_per_symbol = 1;
};

// Rayleigh block-fading draw with an exponential power-delay profile whose RMS
// delay spread is span_symbols / 4. Seed fixes the draw.
ChannelRealization draw_channel(ChannelProfile profile, int span_symbols, int upsampling,
                                std::uint64_t seed);

struct NoiseSpec {
  double n0 = 0.0;  // complex noise variance per sample
  std::uint64_t seed = 0;
};

// Linear convolution with the channel taps plus AWGN.
ComplexSignal propagate(const ComplexSignal& x, const ChannelRealization& ch,
                        const NoiseSpec& noise);

// Filters with p*_{-n}; for the real symmetric RRC this is the pulse itself.
// `origin` advances by the filter group delay.
ComplexSignal matched_filter(const ComplexSignal& x, const PulseShape& pulse);

}  // namespace sclink
