#include <cmath>

#include "sclink/postdist.hpp"

namespace sclink {

namespace {

constexpr double kJitterRel = 1e-8;  // times sigma_f^2, added to the diagonal

// Squared scaled distances: D_pq = sum_i (z_pi - z_qi)^2 / c_i^2, via the
// norm expansion so the heavy part is a single GEMM.
Eigen::MatrixXd scaled_sqdist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const Eigen::VectorXd& scales) {
  const Eigen::MatrixXd ua = a * scales.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd ub = b * scales.cwiseInverse().asDiagonal();
  const Eigen::VectorXd na = ua.rowwise().squaredNorm();
  const Eigen::VectorXd nb = ub.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * ua * ub.transpose();
  d.colwise() += na;
  d.rowwise() += nb.transpose();
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              double sigma_f, const Eigen::VectorXd& scales) {
  return sigma_f * sigma_f * (-scaled_sqdist(a, b, scales)).array().exp().matrix();
}

// Factorizes C = K + (sigma_nu^2 + jitter) I and caches solve products.
// Returns false when the factorization is not positive definite.
bool factorize(GprSegmentModel& m, Eigen::MatrixXd* kernel_out = nullptr) {
  const Eigen::Index n = m.z_train.rows();
  Eigen::MatrixXd c = kernel_matrix(m.z_train, m.z_train, m.sigma_f, m.length_scales);
  if (kernel_out) *kernel_out = c;
  const double diag = m.sigma_nu * m.sigma_nu + kJitterRel * m.sigma_f * m.sigma_f;
  c.diagonal().array() += diag;

  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) return false;

  m.chol_lower = llt.matrixL();
  m.solve_vec = llt.solve(m.targets);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(m.chol_lower(i, i));
  m.log_marginal = -0.5 * m.targets.dot(m.solve_vec) - log_det -
                   0.5 * static_cast<double>(n) * std::log(2.0 * kPi);
  return true;
}

struct Gradient {
  double d_log_sigma_f = 0.0;
  double d_log_sigma_nu = 0.0;
  Eigen::VectorXd d_log_scales;
};

Gradient marginal_gradient(const GprSegmentModel& m, const Eigen::MatrixXd& kernel) {
  const Eigen::Index n = m.z_train.rows();
  const Eigen::Index d = m.z_train.cols();

  // B = alpha alpha^T - C^{-1}; dL/dtheta = 0.5 tr(B dC/dtheta).
  Eigen::MatrixXd c_inv = Eigen::MatrixXd::Identity(n, n);
  m.chol_lower.triangularView<Eigen::Lower>().solveInPlace(c_inv);
  m.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(c_inv);
  Eigen::MatrixXd b = m.solve_vec * m.solve_vec.transpose() - c_inv;

  Gradient g;
  const double tr_b = b.trace();
  g.d_log_sigma_f = (b.cwiseProduct(kernel)).sum() +
                    kJitterRel * m.sigma_f * m.sigma_f * tr_b;
  g.d_log_sigma_nu = m.sigma_nu * m.sigma_nu * tr_b;

  const Eigen::MatrixXd e = b.cwiseProduct(kernel);
  const Eigen::VectorXd row_sum = e.rowwise().sum();
  g.d_log_scales.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::VectorXd zi = m.z_train.col(i);
    const double s = row_sum.dot(zi.cwiseProduct(zi));
    const double t = zi.dot(e * zi);
    g.d_log_scales(i) = 2.0 * (s - t) / (m.length_scales(i) * m.length_scales(i));
  }
  return g;
}

}  // namespace

GprSegmentModel gpr_fit(const Eigen::MatrixXd& z_train, const Eigen::VectorXd& targets,
                        const GprFitOptions& opts) {
  const Eigen::Index n = z_train.rows();
  const Eigen::Index d = z_train.cols();
  if (n == 0 || d == 0 || targets.size() != n)
    throw std::invalid_argument("gpr fit: shape mismatch");

  GprSegmentModel m;
  m.z_train = z_train;
  m.targets = targets;

  const double t_std = std::sqrt(
      (targets.array() - targets.mean()).square().sum() / std::max<Eigen::Index>(1, n - 1));
  m.sigma_f = std::max(t_std, 1e-3);
  m.sigma_nu = opts.fit_sigma_nu ? 0.1 * m.sigma_f : opts.fixed_sigma_nu;
  if (!opts.fit_sigma_nu && m.sigma_nu <= 0.0)
    throw std::invalid_argument("gpr fit: fixed sigma_nu must be positive");
  m.length_scales.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double col_std = std::sqrt(
        (z_train.col(i).array() - z_train.col(i).mean()).square().sum() /
        std::max<Eigen::Index>(1, n - 1));
    m.length_scales(i) = std::max(2.0 * col_std, 0.1);
  }

  Eigen::MatrixXd kernel;
  if (!factorize(m, &kernel))
    throw std::invalid_argument("gpr fit: kernel matrix not positive definite after jitter");

  double step = 0.05;
  int flat_iters = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Gradient g = marginal_gradient(m, kernel);

    GprSegmentModel trial = m;
    auto bounded = [](double v) { return std::max(-10.0, std::min(10.0, v)); };
    trial.sigma_f = std::exp(std::log(m.sigma_f) + step * bounded(g.d_log_sigma_f));
    if (opts.fit_sigma_nu)
      trial.sigma_nu = std::exp(std::log(m.sigma_nu) + step * bounded(g.d_log_sigma_nu));
    for (Eigen::Index i = 0; i < d; ++i)
      trial.length_scales(i) =
          std::exp(std::log(m.length_scales(i)) + step * bounded(g.d_log_scales(i)));

    Eigen::MatrixXd trial_kernel;
    const bool ok = factorize(trial, &trial_kernel) && trial.log_marginal > m.log_marginal;
    if (ok) {
      const double gain = trial.log_marginal - m.log_marginal;
      m = std::move(trial);
      kernel = std::move(trial_kernel);
      step *= 1.2;
      flat_iters = gain < 1e-7 * (1.0 + std::abs(m.log_marginal)) ? flat_iters + 1 : 0;
    } else {
      step *= 0.5;
      ++flat_iters;
    }
    if (step < 1e-7 || flat_iters >= 8) break;
  }
  return m;
}

GprSegmentModel gpr_rebuild(const Eigen::MatrixXd& z_train, const Eigen::VectorXd& targets,
                            double sigma_f, double sigma_nu,
                            const Eigen::VectorXd& length_scales) {
  GprSegmentModel m;
  m.z_train = z_train;
  m.targets = targets;
  m.sigma_f = sigma_f;
  m.sigma_nu = sigma_nu;
  m.length_scales = length_scales;
  if (!factorize(m))
    throw std::invalid_argument("gpr rebuild: kernel matrix not positive definite");
  return m;
}

void gpr_predict(const GprSegmentModel& m, const Eigen::MatrixXd& z_test,
                 Eigen::VectorXd* mean, Eigen::VectorXd* variance) {
  if (z_test.cols() != m.z_train.cols())
    throw std::invalid_argument("gpr predict: dimension mismatch");
  const Eigen::MatrixXd k_star =
      kernel_matrix(z_test, m.z_train, m.sigma_f, m.length_scales);
  if (mean) *mean = k_star * m.solve_vec;
  if (variance) {
    // sigma_*^2 = k(z,z) - || L^{-1} k_* ||^2 + sigma_nu^2.
    Eigen::MatrixXd v = k_star.transpose();
    m.chol_lower.triangularView<Eigen::Lower>().solveInPlace(v);
    const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();
    // the explained part never exceeds sigma_f^2 in exact arithmetic, so the
    // noise floor is a hard lower bound; the clamp only absorbs roundoff
    *variance = (m.sigma_f * m.sigma_f - explained.array() + m.sigma_nu * m.sigma_nu)
                    .max(m.sigma_nu * m.sigma_nu)
                    .matrix();
  }
}

}  // namespace sclink
