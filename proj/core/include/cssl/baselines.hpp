#pragma once

#include <Eigen/Dense>

#include "cssl/regress.hpp"

namespace cssl {

struct LabelPropConfig {
  double gamma = 20.0;
  int max_iter = 1000;
  double tol = 1e-3;
};

// Supervised logistic regression on the concatenated (X_C, X_E) features.
LogisticParams fit_supervised_logreg(const Eigen::MatrixXd& XC_l,
                                     const Eigen::MatrixXd& XE_l,
                                     const Eigen::VectorXd& y_l,
                                     double lambda = 1.0);

Eigen::VectorXi predict_logreg(const LogisticParams& params,
                               const Eigen::MatrixXd& X_C,
                               const Eigen::MatrixXd& X_E);

struct LabelPropResult {
  Eigen::VectorXi labels;  // one per unlabelled row
  bool converged = false;
  int iterations = 0;
  Eigen::MatrixXd F;  // final class-distribution matrix, rows sum to 1
};

// Clamped label propagation over the joint features: W_ij = exp(-gamma
// ||z_i - z_j||^2) with a zero diagonal, T = row-normalized W, F sweeps
// F <- T F with labelled rows re-clamped to one-hot, stopping when the summed
// absolute change falls below tol. Non-convergence at max_iter is a reported
// status, not an error. The zero diagonal keeps the sweep from degenerating
// into the identity map for tight, well-separated clusters at large gamma.
LabelPropResult fit_label_propagation(const Eigen::MatrixXd& Z_l,
                                      const Eigen::VectorXd& y_l,
                                      const Eigen::MatrixXd& Z_u,
                                      const LabelPropConfig& cfg = {});

}  // namespace cssl
