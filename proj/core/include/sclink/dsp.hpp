#pragma once

#include "sclink/types.hpp"

namespace sclink {

// Full linear convolution, output length a + b - 1.
cvec convolve(const cvec& a, const cvec& b);

inline cvec convolve(const cvec& a, const std::vector<double>& b) {
  cvec bc(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) bc[i] = b[i];
  return convolve(a, bc);
}

}  // namespace sclink
