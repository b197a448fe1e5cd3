#include "sclink/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sclink {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double gmi_sample_term(const Eigen::ArrayXd& neg_metric, int truth_id) {
  if (truth_id < 0 || truth_id >= neg_metric.size()) {
    throw std::invalid_argument("gmi_sample_term: truth id out of range");
  }
  const double m = neg_metric.maxCoeff();
  const double lse = m + std::log((neg_metric - m).exp().sum());
  return (lse - neg_metric(truth_id)) / kLn2;
}

void GmiAccumulator::add(double term) {
  sum_ += term;
  sum_sq_ += term * term;
  ++n_;
}

void GmiAccumulator::merge(const GmiAccumulator& other) {
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  n_ += other.n_;
}

AirEstimate GmiAccumulator::estimate(unsigned order) const {
  AirEstimate e;
  e.n_samples = n_;
  if (n_ == 0) return e;
  const double mean = sum_ / static_cast<double>(n_);
  e.bits = std::max(0.0, std::log2(static_cast<double>(order)) - mean);
  if (n_ > 1) {
    const double var =
        std::max(0.0, (sum_sq_ - sum_ * mean) / static_cast<double>(n_ - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n_));
  }
  return e;
}

void gmi_accumulate(GmiAccumulator& acc, const std::vector<cvec>& branch_soft,
                    const std::vector<int>& truth_ids, const DetectorParams& params,
                    const QamAlphabet& alphabet) {
  const std::size_t mu = branch_soft.size();
  if (mu != static_cast<std::size_t>(params.beta.size())) {
    throw std::invalid_argument("gmi_accumulate: branch count does not match detector");
  }
  const std::size_t n = truth_ids.size();
  for (const auto& b : branch_soft) {
    if (b.size() != n) throw std::invalid_argument("gmi_accumulate: length mismatch");
  }
  const std::size_t p = alphabet.points.size();
  Eigen::ArrayXd neg_metric(static_cast<Eigen::Index>(p));
  Eigen::VectorXcd atilde(static_cast<Eigen::Index>(mu));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < mu; ++i) atilde(static_cast<Eigen::Index>(i)) = branch_soft[i][k];
    // q(a) up to a candidate-independent offset; the offset cancels in the term.
    const cplx c1 = params.w_beta.dot(atilde);
    for (std::size_t id = 0; id < p; ++id) {
      const cplx a = alphabet.points[id];
      neg_metric(static_cast<Eigen::Index>(id)) =
          2.0 * (std::conj(a) * c1).real() - std::norm(a) * params.beta_quad;
    }
    acc.add(gmi_sample_term(neg_metric, truth_ids[k]));
  }
}

void gmi_accumulate_scalar(GmiAccumulator& acc, const cvec& soft,
                           const std::vector<int>& truth_ids, cplx beta, double r,
                           const QamAlphabet& alphabet) {
  if (soft.size() != truth_ids.size()) {
    throw std::invalid_argument("gmi_accumulate_scalar: length mismatch");
  }
  if (!(r > 0.0)) throw std::invalid_argument("gmi_accumulate_scalar: nonpositive variance");
  const std::size_t p = alphabet.points.size();
  Eigen::ArrayXd neg_metric(static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < soft.size(); ++k) {
    for (std::size_t id = 0; id < p; ++id) {
      neg_metric(static_cast<Eigen::Index>(id)) =
          -std::norm(soft[k] - beta * alphabet.points[id]) / r;
    }
    acc.add(gmi_sample_term(neg_metric, truth_ids[k]));
  }
}

AirEstimate gmi_air(const std::vector<cvec>& branch_soft, const std::vector<int>& truth_ids,
                    const DetectorParams& params, const QamAlphabet& alphabet) {
  GmiAccumulator acc;
  gmi_accumulate(acc, branch_soft, truth_ids, params, alphabet);
  return acc.estimate(alphabet.order);
}

AirEstimate gmi_air_scalar(const cvec& soft, const std::vector<int>& truth_ids, cplx beta,
                           double r, const QamAlphabet& alphabet) {
  GmiAccumulator acc;
  gmi_accumulate_scalar(acc, soft, truth_ids, beta, r, alphabet);
  return acc.estimate(alphabet.order);
}

BerEstimate wilson_interval(std::uint64_t errors, std::uint64_t n_bits) {
  BerEstimate e;
  e.bit_errors = errors;
  e.n_bits = n_bits;
  if (n_bits == 0) return e;
  const double n = static_cast<double>(n_bits);
  const double phat = static_cast<double>(errors) / n;
  e.ber = phat;
  const double z = 1.96;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  e.wilson_lo = std::max(0.0, (center - half) / denom);
  e.wilson_hi = std::min(1.0, (center + half) / denom);
  return e;
}

std::uint64_t count_bit_errors(const std::vector<int>& decisions, const std::vector<int>& truth,
                               const QamAlphabet& alphabet) {
  if (decisions.size() != truth.size()) {
    throw std::invalid_argument("count_bit_errors: length mismatch");
  }
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    const unsigned x = alphabet.labels[static_cast<std::size_t>(decisions[k])] ^
                       alphabet.labels[static_cast<std::size_t>(truth[k])];
    errors += static_cast<std::uint64_t>(__builtin_popcount(x));
  }
  return errors;
}

OutageReport outage_probability(const std::vector<double>& per_block_rate, double threshold) {
  OutageReport r;
  r.threshold = threshold;
  r.n_blocks = per_block_rate.size();
  for (double v : per_block_rate) {
    if (v < threshold) ++r.n_below;
  }
  if (r.n_blocks > 0) r.p_out = static_cast<double>(r.n_below) / static_cast<double>(r.n_blocks);
  return r;
}

}  // namespace sclink
