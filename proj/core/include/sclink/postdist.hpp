#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sclink/qam.hpp"
#include "sclink/types.hpp"

namespace sclink {

// ---------------------------------------------------------------------------
// Regressor windows
// ---------------------------------------------------------------------------

// Window of half-width `memory` M around symbol n of an equalized block:
// [Re z_{n+M-1} .. Re z_{n-M+1}, Im z_{n+M-1} .. Im z_{n-M+1}], length 4M-2.
// Indices wrap cyclically within the block.
Eigen::VectorXd build_regressor(const cvec& z, int n, int memory);

// All windows of a block as rows (N x (4M-2)).
Eigen::MatrixXd build_regressor_block(const cvec& z, int memory);

// ---------------------------------------------------------------------------
// Gaussian-process post-distorter with BLUE segment fusion
// ---------------------------------------------------------------------------

struct GprFitOptions {
  int max_iters = 200;
  bool fit_sigma_nu = true;
  double fixed_sigma_nu = 0.0;  // used when fit_sigma_nu is false
};

// One segment, one real component. Anisotropic stationary kernel
// k(p, q) = sigma_f^2 exp(-(z_p - z_q)^T diag{c_i^2}^{-1} (z_p - z_q)),
// hyper-parameters fitted by log-marginal-likelihood gradient ascent in the
// log domain with an adaptive step. Cholesky factor and solve vector cached.
struct GprSegmentModel {
  Eigen::MatrixXd z_train;       // n x d
  Eigen::VectorXd targets;       // n
  double sigma_f = 1.0;
  double sigma_nu = 0.1;
  Eigen::VectorXd length_scales; // d
  Eigen::MatrixXd chol_lower;    // L with L L^T = K + (sigma_nu^2 + jitter) I
  Eigen::VectorXd solve_vec;     // (K + ...)^{-1} targets
  double log_marginal = 0.0;
};

GprSegmentModel gpr_fit(const Eigen::MatrixXd& z_train, const Eigen::VectorXd& targets,
                        const GprFitOptions& opts);

// Rebuilds the cached factorization for known hyper-parameters (deserialization
// path; no optimization).
GprSegmentModel gpr_rebuild(const Eigen::MatrixXd& z_train, const Eigen::VectorXd& targets,
                            double sigma_f, double sigma_nu,
                            const Eigen::VectorXd& length_scales);

// Predictive mean and variance (variance includes the sigma_nu^2 noise floor).
void gpr_predict(const GprSegmentModel& model, const Eigen::MatrixXd& z_test,
                 Eigen::VectorXd* mean, Eigen::VectorXd* variance);

// Minimum-variance unbiased fusion of independent unbiased estimates; weights
// are proportional to inverse variances and sum to one.
double blue_fuse(const std::vector<double>& means, const std::vector<double>& variances,
                 std::vector<double>* weights = nullptr);

// Segment ensemble over a slow-time training stream; separate I and Q models.
// sigma_nu is fitted on segment 1 of each component and frozen for the rest.
struct BlueEnsemble {
  std::vector<GprSegmentModel> seg_i;
  std::vector<GprSegmentModel> seg_q;
  int memory = 2;
};

BlueEnsemble blue_fit(const cvec& z_st, const cvec& a_st, int memory, int n_segments,
                      const GprFitOptions& opts = {});

cvec blue_predict(const BlueEnsemble& ens, const cvec& z_block);

// ---------------------------------------------------------------------------
// Single-hidden-layer real network trained by Levenberg-Marquardt
// ---------------------------------------------------------------------------

// Outputs [I, Q](z) = w2{i,q}^T g(W1 z + b1) + b2{i,q}, g(x) = 2/(1+e^{-2x})-1.
struct NnModel {
  Eigen::MatrixXd w1;   // hidden x d
  Eigen::VectorXd b1;   // hidden
  Eigen::VectorXd w2i;  // hidden
  Eigen::VectorXd w2q;  // hidden
  double b2i = 0.0;
  double b2q = 0.0;
};

// Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases, fixed seed.
NnModel nn_init(int hidden, int input_dim, std::uint64_t seed);

Eigen::VectorXd nn_pack(const NnModel& m);
NnModel nn_unpack(const Eigen::VectorXd& v, int hidden, int input_dim);

Eigen::MatrixXd nn_forward(const NnModel& m, const Eigen::MatrixXd& inputs);  // N x 2

// Residuals r = [out_I - t_I; out_Q - t_Q] (2N) and the analytic Jacobian
// d r / d theta (2N x P) in nn_pack order.
void nn_residual_jacobian(const NnModel& m, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets, Eigen::VectorXd* residuals,
                          Eigen::MatrixXd* jacobian);

struct NnTrainOptions {
  int max_epochs = 200;
  double lambda0 = 1e-3;
};

struct NnTrainReport {
  double final_cost = 0.0;  // (1/2N) sum of squared residuals, both components
  int epochs = 0;
};

// Damped Gauss-Newton steps on the joint I/Q residual: damping /10 on an
// accepted (strictly decreasing) step, x10 on a rejected one. Returns the
// best-cost weights seen.
NnTrainReport nn_train(NnModel& m, const Eigen::MatrixXd& inputs,
                       const Eigen::MatrixXd& targets, const NnTrainOptions& opts = {});

cvec nn_predict(const NnModel& m, const cvec& z_block, int memory);

// ---------------------------------------------------------------------------
// Third-order series baseline
// ---------------------------------------------------------------------------

// Linear taps z_{n-k} and cubes z_{n-k}|z_{n-l}|^2 over lags k, l in
// [-(M-1), M-1], complex least squares against the training symbols.
struct VolterraModel {
  int memory = 2;
  cvec linear;  // 2M-1, lag k = idx - (M-1)
  cvec cubic;   // (2M-1)^2, row-major over (k, l)
};

VolterraModel volterra_fit(const cvec& z_st, const cvec& a_st, int memory);
cvec volterra_predict(const VolterraModel& m, const cvec& z_block);

// ---------------------------------------------------------------------------
// Memoryless per-point correction baseline
// ---------------------------------------------------------------------------

// varpi[a] = conditional mean of z/a given transmitted point a. Points with
// fewer than min_hits training hits fall back to pooling over their amplitude
// ring; an unfillable entry is rejected.
struct MmTable {
  cvec varpi;  // per point id
  int order = 0;
};

MmTable mm_fit(const cvec& z_st, const std::vector<int>& ids, const QamAlphabet& alphabet,
               int min_hits = 20);

// argmin_a |z - varpi[a] * a|, lowest point id on ties.
int mm_detect_one(const MmTable& t, const QamAlphabet& alphabet, cplx z);
std::vector<int> mm_detect(const MmTable& t, const QamAlphabet& alphabet, const cvec& z);

// ---------------------------------------------------------------------------
// Serialization (versioned text dumps, exact double round-trip)
// ---------------------------------------------------------------------------

void save_model(std::ostream& os, const BlueEnsemble& m);
void save_model(std::ostream& os, const NnModel& m);
void save_model(std::ostream& os, const VolterraModel& m);
void save_model(std::ostream& os, const MmTable& m);

// Reads the tagged header and dispatches; throws on version or type mismatch.
std::string peek_model_type(std::istream& is);
BlueEnsemble load_blue(std::istream& is);
NnModel load_nn(std::istream& is);
VolterraModel load_volterra(std::istream& is);
MmTable load_mm(std::istream& is);

}  // namespace sclink
