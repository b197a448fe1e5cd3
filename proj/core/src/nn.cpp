#include <cmath>

#include "sclink/postdist.hpp"
#include "sclink/rng.hpp"

namespace sclink {

namespace {

int param_count(int hidden, int dim) { return hidden * dim + hidden + 2 * hidden + 2; }

}  // namespace

NnModel nn_init(int hidden, int input_dim, std::uint64_t seed) {
  if (hidden < 1 || input_dim < 1) throw std::invalid_argument("nn init: bad shape");
  NnModel m;
  m.w1.resize(hidden, input_dim);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2i.resize(hidden);
  m.w2q.resize(hidden);

  Rng rng(seed);
  const double lim1 = std::sqrt(6.0 / (input_dim + hidden));
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < input_dim; ++c) m.w1(r, c) = lim1 * (2.0 * rng.uniform() - 1.0);
  const double lim2 = std::sqrt(6.0 / (hidden + 1));
  for (int r = 0; r < hidden; ++r) {
    m.w2i(r) = lim2 * (2.0 * rng.uniform() - 1.0);
    m.w2q(r) = lim2 * (2.0 * rng.uniform() - 1.0);
  }
  return m;
}

Eigen::VectorXd nn_pack(const NnModel& m) {
  const int hidden = static_cast<int>(m.w1.rows());
  const int dim = static_cast<int>(m.w1.cols());
  Eigen::VectorXd v(param_count(hidden, dim));
  int pos = 0;
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < dim; ++c) v(pos++) = m.w1(r, c);
  for (int r = 0; r < hidden; ++r) v(pos++) = m.b1(r);
  for (int r = 0; r < hidden; ++r) v(pos++) = m.w2i(r);
  for (int r = 0; r < hidden; ++r) v(pos++) = m.w2q(r);
  v(pos++) = m.b2i;
  v(pos++) = m.b2q;
  return v;
}

NnModel nn_unpack(const Eigen::VectorXd& v, int hidden, int input_dim) {
  if (v.size() != param_count(hidden, input_dim))
    throw std::invalid_argument("nn unpack: wrong parameter count");
  NnModel m;
  m.w1.resize(hidden, input_dim);
  m.b1.resize(hidden);
  m.w2i.resize(hidden);
  m.w2q.resize(hidden);
  int pos = 0;
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < input_dim; ++c) m.w1(r, c) = v(pos++);
  for (int r = 0; r < hidden; ++r) m.b1(r) = v(pos++);
  for (int r = 0; r < hidden; ++r) m.w2i(r) = v(pos++);
  for (int r = 0; r < hidden; ++r) m.w2q(r) = v(pos++);
  m.b2i = v(pos++);
  m.b2q = v(pos++);
  return m;
}

Eigen::MatrixXd nn_forward(const NnModel& m, const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != m.w1.cols()) throw std::invalid_argument("nn forward: dim mismatch");
  // g(x) = 2/(1+e^{-2x}) - 1 == tanh(x).
  const Eigen::MatrixXd h =
      ((inputs * m.w1.transpose()).rowwise() + m.b1.transpose()).array().tanh().matrix();
  Eigen::MatrixXd out(inputs.rows(), 2);
  out.col(0) = ((h * m.w2i).array() + m.b2i).matrix();
  out.col(1) = ((h * m.w2q).array() + m.b2q).matrix();
  return out;
}

void nn_residual_jacobian(const NnModel& m, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets, Eigen::VectorXd* residuals,
                          Eigen::MatrixXd* jacobian) {
  const int n = static_cast<int>(inputs.rows());
  const int hidden = static_cast<int>(m.w1.rows());
  const int dim = static_cast<int>(m.w1.cols());
  const int p = param_count(hidden, dim);

  const Eigen::MatrixXd h =
      ((inputs * m.w1.transpose()).rowwise() + m.b1.transpose()).array().tanh().matrix();
  const Eigen::MatrixXd dh = (1.0 - h.array().square()).matrix();  // g' at the hidden layer

  if (residuals) {
    residuals->resize(2 * n);
    residuals->head(n) = ((h * m.w2i).array() + m.b2i - targets.col(0).array()).matrix();
    residuals->tail(n) = ((h * m.w2q).array() + m.b2q - targets.col(1).array()).matrix();
  }

  if (!jacobian) return;
  jacobian->setZero(2 * n, p);
  const int off_b1 = hidden * dim;
  const int off_w2i = off_b1 + hidden;
  const int off_w2q = off_w2i + hidden;
  const int off_b2 = off_w2q + hidden;

  for (int s = 0; s < n; ++s) {
    for (int k = 0; k < hidden; ++k) {
      const double gi = m.w2i(k) * dh(s, k);
      const double gq = m.w2q(k) * dh(s, k);
      for (int c = 0; c < dim; ++c) {
        const double x = inputs(s, c);
        (*jacobian)(s, k * dim + c) = gi * x;
        (*jacobian)(n + s, k * dim + c) = gq * x;
      }
      (*jacobian)(s, off_b1 + k) = gi;
      (*jacobian)(n + s, off_b1 + k) = gq;
      (*jacobian)(s, off_w2i + k) = h(s, k);
      (*jacobian)(n + s, off_w2q + k) = h(s, k);
    }
    (*jacobian)(s, off_b2) = 1.0;
    (*jacobian)(n + s, off_b2 + 1) = 1.0;
  }
}

NnTrainReport nn_train(NnModel& m, const Eigen::MatrixXd& inputs,
                       const Eigen::MatrixXd& targets, const NnTrainOptions& opts) {
  const int n = static_cast<int>(inputs.rows());
  const int hidden = static_cast<int>(m.w1.rows());
  const int dim = static_cast<int>(m.w1.cols());
  if (targets.rows() != n || targets.cols() != 2)
    throw std::invalid_argument("nn train: target shape mismatch");
  if (n < 10 * param_count(hidden, dim))
    throw std::invalid_argument("nn train: need at least 10 samples per parameter");

  auto cost_of = [&](const NnModel& model) {
    const Eigen::MatrixXd out = nn_forward(model, inputs);
    return (out - targets).squaredNorm() / (2.0 * n);
  };

  Eigen::VectorXd theta = nn_pack(m);
  double cost = cost_of(m);
  Eigen::VectorXd best_theta = theta;
  double best_cost = cost;

  double lambda = opts.lambda0;
  int epochs = 0;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
    ++epochs;
    nn_residual_jacobian(m, inputs, targets, &r, &jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    if (jtr.lpNorm<Eigen::Infinity>() < 1e-12) break;

    bool accepted = false;
    while (lambda <= 1e12) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      if (ldlt.info() != Eigen::Success) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd delta = ldlt.solve(-jtr);
      const NnModel trial = nn_unpack(theta + delta, hidden, dim);
      const double trial_cost = cost_of(trial);
      if (trial_cost < cost) {
        theta += delta;
        m = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-14);
        accepted = true;
        if (cost < best_cost) {
          best_cost = cost;
          best_theta = theta;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;              // damping exhausted
    if (cost < 1e-16) break;
  }

  m = nn_unpack(best_theta, hidden, dim);
  return {best_cost, epochs};
}

cvec nn_predict(const NnModel& m, const cvec& z_block, int memory) {
  const Eigen::MatrixXd in = build_regressor_block(z_block, memory);
  const Eigen::MatrixXd out = nn_forward(m, in);
  cvec result(z_block.size());
  for (std::size_t r = 0; r < result.size(); ++r)
    result[r] = {out(static_cast<int>(r), 0), out(static_cast<int>(r), 1)};
  return result;
}

}  // namespace sclink
