#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sclink/qam.hpp"
#include "sclink/types.hpp"

namespace sclink {

// Whitened combining detector over mu post-distorted branch outputs: a scalar
// complex gain per branch and the residual covariance, fitted on a training
// block; detection minimizes (atilde - beta a)^H R^{-1} (atilde - beta a).
struct DetectorParams {
  Eigen::VectorXcd beta;
  Eigen::MatrixXcd r_eta;
  Eigen::MatrixXcd r_inv;       // cached
  Eigen::VectorXcd w_beta;      // cached R^{-1} beta
  double beta_quad = 0.0;       // cached beta^H R^{-1} beta
};

// branch_soft: one stream per branch, equal lengths N; known training points.
// Requires N >= mu + 1 so the covariance has full rank on average; the
// estimate is ridged by 1e-9 * trace/mu.
DetectorParams train_dassd(const std::vector<cvec>& branch_soft, const cvec& train_points);

int dassd_detect_one(const DetectorParams& p, const Eigen::VectorXcd& atilde,
                     const QamAlphabet& alphabet);

std::vector<int> dassd_detect(const DetectorParams& p, const std::vector<cvec>& branch_soft,
                              const QamAlphabet& alphabet);

// Nearest constellation point, lowest id on ties.
int conventional_detect_one(cplx z, const QamAlphabet& alphabet);
std::vector<int> conventional_detect(const cvec& z, const QamAlphabet& alphabet);

}  // namespace sclink
