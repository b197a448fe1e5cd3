#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sclink/detect.hpp"
#include "sclink/qam.hpp"
#include "sclink/types.hpp"

namespace sclink {

struct AirEstimate {
  double bits = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

// One mismatched-decoding information term in bits for a symbol whose decoding
// metric over all candidates is exp(neg_metric[a]); truth_id indexes the sent
// candidate. Log-sum-exp is evaluated with max subtraction.
double gmi_sample_term(const Eigen::ArrayXd& neg_metric, int truth_id);

// Streaming mean/variance of per-sample terms; estimate() converts to an
// achievable rate log2(order) - mean(term), clamped below at 0.
class GmiAccumulator {
 public:
  void add(double term);
  void merge(const GmiAccumulator& other);
  AirEstimate estimate(unsigned order) const;
  std::size_t count() const { return n_; }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t n_ = 0;
};

// Rate of the whitened vector metric q(a) = (atilde - beta a)^H R^{-1} (atilde - beta a).
AirEstimate gmi_air(const std::vector<cvec>& branch_soft, const std::vector<int>& truth_ids,
                    const DetectorParams& params, const QamAlphabet& alphabet);

// Scalar branch with metric |z - beta a|^2 / r.
AirEstimate gmi_air_scalar(const cvec& soft, const std::vector<int>& truth_ids, cplx beta,
                           double r, const QamAlphabet& alphabet);

void gmi_accumulate(GmiAccumulator& acc, const std::vector<cvec>& branch_soft,
                    const std::vector<int>& truth_ids, const DetectorParams& params,
                    const QamAlphabet& alphabet);

void gmi_accumulate_scalar(GmiAccumulator& acc, const cvec& soft,
                           const std::vector<int>& truth_ids, cplx beta, double r,
                           const QamAlphabet& alphabet);

struct BerEstimate {
  double ber = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t n_bits = 0;
};

// 95% Wilson score interval (z = 1.96).
BerEstimate wilson_interval(std::uint64_t errors, std::uint64_t n_bits);

std::uint64_t count_bit_errors(const std::vector<int>& decisions, const std::vector<int>& truth,
                               const QamAlphabet& alphabet);

struct OutageReport {
  double p_out = 0.0;
  std::size_t n_blocks = 0;
  std::size_t n_below = 0;
  double threshold = 0.0;
};

OutageReport outage_probability(const std::vector<double>& per_block_rate, double threshold);

}  // namespace sclink
