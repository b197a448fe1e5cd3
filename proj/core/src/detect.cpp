#include "sclink/detect.hpp"

#include <stdexcept>

namespace sclink {

DetectorParams train_dassd(const std::vector<cvec>& branch_soft, const cvec& train_points) {
  const std::size_t mu = branch_soft.size();
  if (mu == 0) throw std::invalid_argument("train_dassd: no branches");
  const std::size_t n = train_points.size();
  if (n < mu + 1) throw std::invalid_argument("train_dassd: need at least mu+1 training symbols");
  for (const auto& b : branch_soft) {
    if (b.size() != n) throw std::invalid_argument("train_dassd: branch length mismatch");
  }

  Eigen::MatrixXcd y(mu, n);
  for (std::size_t i = 0; i < mu; ++i) {
    for (std::size_t k = 0; k < n; ++k) y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = branch_soft[i][k];
  }
  Eigen::VectorXcd a(n);
  for (std::size_t k = 0; k < n; ++k) a(static_cast<Eigen::Index>(k)) = train_points[k];

  const double denom = a.squaredNorm();
  if (denom <= 0.0) throw std::invalid_argument("train_dassd: zero-energy training block");

  DetectorParams p;
  p.beta = (y * a.conjugate()) / denom;

  Eigen::MatrixXcd resid = y - p.beta * a.transpose();
  Eigen::MatrixXcd r = (resid * resid.adjoint()) / static_cast<double>(n - 1);
  const double ridge = 1e-9 * r.trace().real() / static_cast<double>(mu);
  r += ridge * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(mu));
  p.r_eta = r;

  Eigen::LLT<Eigen::MatrixXcd> llt(r);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("train_dassd: residual covariance not positive definite");
  }
  p.r_inv = llt.solve(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(mu)));
  p.w_beta = p.r_inv * p.beta;
  p.beta_quad = p.beta.dot(p.w_beta).real();  // Eigen dot conjugates the left argument
  return p;
}

int dassd_detect_one(const DetectorParams& p, const Eigen::VectorXcd& atilde,
                     const QamAlphabet& alphabet) {
  // argmin_a (atilde - beta a)^H W (atilde - beta a); the atilde^H W atilde
  // term is constant over candidates and dropped.
  const cplx c1 = p.w_beta.dot(atilde);  // beta^H W atilde
  int best = 0;
  double best_metric = 0.0;
  for (std::size_t id = 0; id < alphabet.points.size(); ++id) {
    const cplx a = alphabet.points[id];
    const double m = -2.0 * (std::conj(a) * c1).real() + std::norm(a) * p.beta_quad;
    if (id == 0 || m < best_metric) {
      best_metric = m;
      best = static_cast<int>(id);
    }
  }
  return best;
}

std::vector<int> dassd_detect(const DetectorParams& p, const std::vector<cvec>& branch_soft,
                              const QamAlphabet& alphabet) {
  const std::size_t mu = branch_soft.size();
  if (mu != static_cast<std::size_t>(p.beta.size())) {
    throw std::invalid_argument("dassd_detect: branch count does not match detector");
  }
  const std::size_t n = branch_soft.empty() ? 0 : branch_soft[0].size();
  for (const auto& b : branch_soft) {
    if (b.size() != n) throw std::invalid_argument("dassd_detect: branch length mismatch");
  }
  std::vector<int> out(n);
  Eigen::VectorXcd atilde(static_cast<Eigen::Index>(mu));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < mu; ++i) atilde(static_cast<Eigen::Index>(i)) = branch_soft[i][k];
    out[k] = dassd_detect_one(p, atilde, alphabet);
  }
  return out;
}

int conventional_detect_one(cplx z, const QamAlphabet& alphabet) {
  int best = 0;
  double best_d = 0.0;
  for (std::size_t id = 0; id < alphabet.points.size(); ++id) {
    const double d = std::norm(z - alphabet.points[id]);
    if (id == 0 || d < best_d) {
      best_d = d;
      best = static_cast<int>(id);
    }
  }
  return best;
}

std::vector<int> conventional_detect(const cvec& z, const QamAlphabet& alphabet) {
  std::vector<int> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = conventional_detect_one(z[k], alphabet);
  return out;
}

}  // namespace sclink
