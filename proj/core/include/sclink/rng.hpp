#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sclink/types.hpp"

namespace sclink {

// Derives an independent stream seed from a master seed and a tag path, e.g.
// derive_seed(master, "data-noise", point_idx, block_idx). Uses FNV-1a over the
// tag plus splitmix64 finalization so streams are decorrelated and stable
// across platforms and runs.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return std::generate_canonical<double, 53>(eng_);
  }

  // Standard normal via Box-Muller; avoids distribution objects so the exact
  // sequence is pinned by this code, not the standard library implementation.
  double gaussian();

  // CN(0, var): circularly symmetric complex Gaussian.
  cplx cgaussian(double var = 1.0);

  std::uint64_t integer(std::uint64_t bound);  // [0, bound)

  cvec cgaussian_vector(std::size_t n, double var);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sclink
