#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cssl/regress.hpp"

namespace cssl {

// The two competing cause->effect regressors plus the rows currently absorbed
// into each class. Row indices refer to the stacked [labelled; unlabelled]
// matrix, so unlabelled point j lives at n_l + j.
struct MechanismPair {
  RidgeParams f0;
  RidgeParams f1;
  double lambda = 1.0;
  std::vector<Eigen::Index> class_rows[2];
};

struct SelfStep {
  int step = 0;
  int chosen_class = 0;
  Eigen::Index chosen_sample = 0;  // index into the unlabelled block
  double residual = 0.0;
};

struct SelfLearnTrace {
  std::vector<SelfStep> steps;
};

struct CondSelfResult {
  Eigen::VectorXi labels;  // one per unlabelled point
  MechanismPair pair;
  SelfLearnTrace trace;
};

// Pluggable regression seam (nonlinear mechanisms would slot in here);
// the default wraps weighted_ridge with intercept augmentation.
using RegressFn = std::function<RidgeParams(
    const Eigen::MatrixXd&, const Eigen::MatrixXd&, const Eigen::VectorXd&,
    double)>;

// Greedy absorption: refit both regressors on their current rows, then move
// the globally best-explained unlabelled point (smallest squared residual,
// ties to the lower class then the lower sample index) into that class.
// Repeats until every unlabelled point is labelled.
CondSelfResult fit_condself(const Eigen::MatrixXd& XC_l,
                            const Eigen::VectorXd& y_l,
                            const Eigen::MatrixXd& XE_l,
                            const Eigen::MatrixXd& XC_u,
                            const Eigen::MatrixXd& XE_u, double lambda = 1.0,
                            const RegressFn& regress = {});

// argmin_i ||x_E - f_i(x_C)||^2 per row; ties go to class 0.
Eigen::VectorXi predict_condself(const MechanismPair& pair,
                                 const Eigen::MatrixXd& X_C,
                                 const Eigen::MatrixXd& X_E);

}  // namespace cssl
