#include "sclink/qam.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sclink {

namespace {

std::uint32_t gray_encode(std::uint32_t i) { return i ^ (i >> 1); }

std::uint32_t gray_decode(std::uint32_t g) {
  std::uint32_t b = g;
  while (g >>= 1) b ^= g;
  return b;
}

}  // namespace

QamAlphabet make_qam(int order) {
  if (order != 4 && order != 16 && order != 64 && order != 256 && order != 1024)
    throw std::invalid_argument("qam: order must be one of 4, 16, 64, 256, 1024");

  QamAlphabet q;
  q.order = order;
  q.side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  q.bits_per_symbol = static_cast<int>(std::lround(std::log2(order)));
  const int half_bits = q.bits_per_symbol / 2;

  // Unit average energy: E{|a|^2} = 2(P-1)/3 for unscaled odd-integer levels.
  const double energy = 2.0 * (order - 1) / 3.0;
  q.scale = 1.0 / std::sqrt(energy);
  q.min_distance = 2.0 * q.scale;

  q.points.resize(order);
  q.labels.resize(order);
  for (int i = 0; i < q.side; ++i) {
    // Level index 0 carries the most positive amplitude.
    const double ai = (q.side - 1 - 2 * i) * q.scale;
    for (int k = 0; k < q.side; ++k) {
      const double ak = (q.side - 1 - 2 * k) * q.scale;
      const int id = i * q.side + k;
      q.points[id] = {ai, ak};
      q.labels[id] = (gray_encode(static_cast<std::uint32_t>(i)) << half_bits) |
                     gray_encode(static_cast<std::uint32_t>(k));
    }
  }
  return q;
}

std::vector<int> map_bits(const QamAlphabet& q, const std::vector<std::uint8_t>& bits) {
  if (bits.size() % static_cast<std::size_t>(q.bits_per_symbol) != 0)
    throw std::invalid_argument("qam: bit count not a multiple of bits per symbol");
  const int half_bits = q.bits_per_symbol / 2;
  std::vector<int> ids(bits.size() / q.bits_per_symbol);
  std::size_t pos = 0;
  for (auto& id : ids) {
    std::uint32_t gi = 0, gk = 0;
    for (int b = 0; b < half_bits; ++b) gi = (gi << 1) | (bits[pos++] & 1u);
    for (int b = 0; b < half_bits; ++b) gk = (gk << 1) | (bits[pos++] & 1u);
    id = static_cast<int>(gray_decode(gi)) * q.side + static_cast<int>(gray_decode(gk));
  }
  return ids;
}

std::vector<std::uint8_t> unmap_points(const QamAlphabet& q, const std::vector<int>& ids) {
  std::vector<std::uint8_t> bits;
  bits.reserve(ids.size() * q.bits_per_symbol);
  for (int id : ids) {
    if (id < 0 || id >= q.order) throw std::invalid_argument("qam: point id out of range");
    for (int b = q.bits_per_symbol - 1; b >= 0; --b)
      bits.push_back(static_cast<std::uint8_t>((q.labels[id] >> b) & 1u));
  }
  return bits;
}

cvec points_of(const QamAlphabet& q, const std::vector<int>& ids) {
  cvec out(ids.size());
  for (std::size_t n = 0; n < ids.size(); ++n) {
    if (ids[n] < 0 || ids[n] >= q.order) throw std::invalid_argument("qam: point id out of range");
    out[n] = q.points[ids[n]];
  }
  return out;
}

std::vector<double> amplitude_rings(const QamAlphabet& q, std::vector<int>* ring_of_point) {
  std::map<long long, int> seen;  // modulus quantized to 1e-12 -> ring id
  std::vector<double> rings;
  std::vector<int> assign(q.order);
  for (int id = 0; id < q.order; ++id) {
    const double r = std::abs(q.points[id]);
    const long long key = static_cast<long long>(std::llround(r * 1e12));
    auto it = seen.find(key);
    if (it == seen.end()) {
      it = seen.emplace(key, static_cast<int>(rings.size())).first;
      rings.push_back(r);
    }
    assign[id] = it->second;
  }
  // Re-index rings in ascending modulus order.
  std::vector<int> order_idx(rings.size());
  for (std::size_t i = 0; i < order_idx.size(); ++i) order_idx[i] = static_cast<int>(i);
  std::sort(order_idx.begin(), order_idx.end(),
            [&](int a, int b) { return rings[a] < rings[b]; });
  std::vector<int> rank(rings.size());
  std::vector<double> sorted(rings.size());
  for (std::size_t i = 0; i < order_idx.size(); ++i) {
    rank[order_idx[i]] = static_cast<int>(i);
    sorted[i] = rings[order_idx[i]];
  }
  for (auto& a : assign) a = rank[a];
  if (ring_of_point) *ring_of_point = std::move(assign);
  return sorted;
}

}  // namespace sclink
