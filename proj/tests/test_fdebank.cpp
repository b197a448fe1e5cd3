#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sclink/fdebank.hpp"
#include "sclink/fft.hpp"
#include "sclink/rng.hpp"

using namespace sclink;

TEST_CASE("branch split indexes the interleaved stream") {
  const int mu = 4, n_cp = 3, block_len = 8;
  ComplexSignal sig;
  sig.samples_per_symbol = mu;
  sig.origin = 5;
  sig.samples.resize(sig.origin + (n_cp + block_len + 2) * mu);
  for (std::size_t i = 0; i < sig.samples.size(); ++i)
    sig.samples[i] = {static_cast<double>(i), 0.0};

  const auto bs = split_branches(sig, mu, n_cp, block_len);
  REQUIRE(bs.branches.size() == 4);
  CHECK(bs.first_sample == 5 + 3 * 4);
  for (int i = 0; i < mu; ++i)
    for (int n = 0; n < block_len; ++n)
      CHECK(bs.branches[i][n].real() == doctest::Approx(17.0 + n * 4 + i));

  const auto flat = interleave_branches(bs);
  REQUIRE(flat.size() == static_cast<std::size_t>(mu) * block_len);
  for (std::size_t i = 0; i < flat.size(); ++i)
    CHECK(flat[i].real() == doctest::Approx(17.0 + static_cast<double>(i)));

  CHECK_THROWS(split_branches(sig, mu, n_cp, 1000));
  CHECK_THROWS(split_branches(sig, 3, n_cp, block_len));
}

TEST_CASE("least-squares estimate agrees with an explicit pseudo-inverse") {
  Rng rng(9);
  const int n_ft = 64, lb = 3, lf = 5, n_cp = 6, n_cs = 4;
  const cvec ft = rng.cgaussian_vector(n_ft, 1.0);
  const cvec y = rng.cgaussian_vector(n_ft, 1.0);  // arbitrary observation

  const auto csi = ls_estimate(ft, y, lb, lf, n_cp, n_cs);
  REQUIRE(static_cast<int>(csi.taps.size()) == lb + lf - 1);

  // reference solution through an SVD pseudo-inverse of the same design matrix
  auto sym_at = [&](int idx) -> cplx {
    if (idx >= 0 && idx < n_ft) return ft[idx];
    if (idx < 0 && idx >= -n_cp) return ft[idx + n_ft];
    if (idx >= n_ft && idx < n_ft + n_cs) return ft[idx - n_ft];
    return {0.0, 0.0};
  };
  Eigen::MatrixXcd a(n_ft, lb + lf - 1);
  for (int k = 0; k < n_ft; ++k)
    for (int l = 0; l < lb + lf - 1; ++l) a(k, l) = sym_at(k - l + lb - 1);
  Eigen::VectorXcd yv(n_ft);
  for (int k = 0; k < n_ft; ++k) yv(k) = y[k];
  const Eigen::VectorXcd h =
      a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(yv);

  for (int i = 0; i < lb + lf - 1; ++i) CHECK(std::abs(csi.taps[i] - h(i)) < 1e-9);
}

TEST_CASE("a short known channel is recovered from circular training") {
  Rng rng(11);
  const int n_ft = 128, n_cp = 8, n_cs = 8;
  const cvec ft = rng.cgaussian_vector(n_ft, 1.0);
  const cvec true_taps = {cplx{0.2, -0.1}, cplx{1.0, 0.3}, cplx{-0.4, 0.05}};  // lags -1, 0, 1

  cvec y(n_ft, cplx{0.0, 0.0});
  for (int k = 0; k < n_ft; ++k)
    for (int l = -1; l <= 1; ++l)
      y[k] += true_taps[l + 1] * ft[((k - l) % n_ft + n_ft) % n_ft];

  const auto csi = ls_estimate(ft, y, 2, 2, n_cp, n_cs);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(csi.taps[i] - true_taps[i]) < 1e-6);
  CHECK(csi.lag_of(0) == -1);
  CHECK(csi.lag_of(2) == 1);
}

TEST_CASE("rank-deficient training is rejected") {
  const cvec ft(32, cplx{1.0, 0.0});  // constant training cannot separate lags
  const cvec y(32, cplx{1.0, 0.0});
  CHECK_THROWS(ls_estimate(ft, y, 2, 3, 4, 4));
  CHECK_THROWS(ls_estimate(ft, y, 0, 3, 4, 4));
  CHECK_THROWS(ls_estimate(cvec(2), cvec(2), 2, 3, 0, 0));
}

TEST_CASE("bin response is the wrapped-lag transform") {
  SymbolRateCsi csi;
  csi.lb = 2;
  csi.lf = 3;
  csi.taps = {cplx{0.1, 0.2}, cplx{1.0, 0.0}, cplx{0.3, -0.1}, cplx{-0.2, 0.05}};
  const int n = 16;
  const auto lam = channel_bin_response(csi, n);
  REQUIRE(lam.size() == 16);
  for (int k = 0; k < n; ++k) {
    cplx want = 0.0;
    for (std::size_t idx = 0; idx < csi.taps.size(); ++idx) {
      const double ang = -2.0 * kPi * k * csi.lag_of(static_cast<int>(idx)) / n;
      want += csi.taps[idx] * cplx{std::cos(ang), std::sin(ang)};
    }
    CHECK(std::abs(lam[k] - want) < 1e-12);
  }
}

TEST_CASE("zero-forcing equalization inverts a circular channel exactly") {
  Rng rng(13);
  const int n = 256;
  SymbolRateCsi csi;
  csi.lb = 3;
  csi.lf = 4;
  csi.taps = rng.cgaussian_vector(6, 1.0);
  csi.taps[2] += 4.0;  // keep every bin well away from zero

  const cvec x = rng.cgaussian_vector(n, 1.0);
  // circular convolution of x with the lag taps
  cvec y(n, cplx{0.0, 0.0});
  for (int k = 0; k < n; ++k)
    for (std::size_t idx = 0; idx < csi.taps.size(); ++idx) {
      const int lag = csi.lag_of(static_cast<int>(idx));
      y[k] += csi.taps[idx] * x[((k - lag) % n + n) % n];
    }

  const cvec xhat = fde_equalize(y, csi, 0.0);
  for (int k = 0; k < n; ++k) CHECK(std::abs(xhat[k] - x[k]) < 1e-9);
}

TEST_CASE("regularized equalization matches the per-bin reference filter") {
  Rng rng(17);
  const int n = 64;
  SymbolRateCsi csi;
  csi.lb = 2;
  csi.lf = 2;
  csi.taps = rng.cgaussian_vector(3, 1.0);
  const cvec y = rng.cgaussian_vector(n, 1.0);
  const double delta = 0.07;

  const cvec got = fde_equalize(y, csi, delta);

  const cvec lam = channel_bin_response(csi, n);
  cvec yf = dft_forward_unitary(y);
  for (int k = 0; k < n; ++k) yf[k] *= std::conj(lam[k]) / (std::norm(lam[k]) + delta);
  const cvec want = dft_inverse_unitary(yf);
  for (int k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
}

TEST_CASE("a dead bin without regularization is singular") {
  SymbolRateCsi csi;
  csi.lb = 1;
  csi.lf = 2;
  csi.taps = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};  // vanishes at bin 0
  const cvec y(8, cplx{1.0, 0.0});
  CHECK_THROWS(fde_equalize(y, csi, 0.0));
  CHECK_NOTHROW(fde_equalize(y, csi, 1e-3));
}
