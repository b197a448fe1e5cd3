#pragma once

#include <cstdint>
#include <vector>

#include "sclink/types.hpp"

namespace sclink {

// Square QAM with unit average energy and an independent reflected-binary
// (Gray) code per axis. Point index = i_level * side + q_level; labels pack the
// in-phase bits above the quadrature bits, MSB first.
struct QamAlphabet {
  int order = 0;
  int bits_per_symbol = 0;
  int side = 0;
  double scale = 1.0;            // PAM level spacing is 2 * scale
  cvec points;                   // indexed by point id
  std::vector<std::uint32_t> labels;  // Gray bit label per point id
  double min_distance = 0.0;
};

// Supported orders: 4, 16, 64, 256, 1024. Anything else is rejected.
QamAlphabet make_qam(int order);

// Maps a 0/1 bit stream (length must divide evenly) to point ids.
std::vector<int> map_bits(const QamAlphabet& q, const std::vector<std::uint8_t>& bits);

std::vector<std::uint8_t> unmap_points(const QamAlphabet& q, const std::vector<int>& ids);

cvec points_of(const QamAlphabet& q, const std::vector<int>& ids);

// Distinct constellation moduli in ascending order, and the ring id per point.
std::vector<double> amplitude_rings(const QamAlphabet& q, std::vector<int>* ring_of_point = nullptr);

}  // namespace sclink
