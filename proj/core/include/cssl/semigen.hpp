#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cssl/regress.hpp"

namespace cssl {

// Semi-generative model of P(Y, X_E | X_C): logistic prior P(Y=1|X_C) plus one
// linear-Gaussian mechanism X_E | X_C, Y=i per class with diagonal noise.
struct SemiGenParams {
  LogisticParams prior;
  RidgeParams mech0;        // (d_C+1) x d_E, intercept-augmented
  RidgeParams mech1;
  Eigen::VectorXd noise0;   // per-dimension residual variances, floored
  Eigen::VectorXd noise1;

  const RidgeParams& mech(int cls) const { return cls == 0 ? mech0 : mech1; }
  const Eigen::VectorXd& noise(int cls) const {
    return cls == 0 ? noise0 : noise1;
  }
};

struct Lambdas {
  double ridge = 1.0;
  double logistic = 1.0;
};

enum class EmMode { kSoft, kHard };

// One record per EM iteration. nll is the joint (complete-data) NLL in hard
// mode and the marginal NLL in soft mode, evaluated at that iteration's
// refitted parameters. labels_changed counts threshold flips between
// consecutive E-steps (the initialization E-step is the first baseline);
// max_q_change is the infinity norm of the responsibility update.
struct EmIter {
  int iteration = 0;
  double nll = 0.0;
  int labels_changed = 0;
  double max_q_change = 0.0;
};

struct EmTrace {
  EmMode mode = EmMode::kSoft;
  std::vector<EmIter> iters;
};

struct EmResult {
  SemiGenParams params;
  Eigen::VectorXd q;  // responsibilities P(Y=1|...) (hard mode: 0/1 values)
  EmTrace trace;
};

double posterior(const SemiGenParams& p, const Eigen::RowVectorXd& x_C,
                 const Eigen::RowVectorXd& x_E);
Eigen::VectorXd posterior(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                          const Eigen::MatrixXd& X_E);

// Expected complete-data NLL under responsibilities y in [0,1]^n (hard labels
// are the 0/1 special case): label term plus weighted Gaussian terms.
double nll(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
           const Eigen::VectorXd& y, const Eigen::MatrixXd& X_E);

// Marginal NLL of unlabelled rows: -sum log sum_y p(y, x_E | x_C).
double nll_marginal(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                    const Eigen::MatrixXd& X_E);

SemiGenParams fit_supervised(const Eigen::MatrixXd& X_C,
                             const Eigen::VectorXd& y,
                             const Eigen::MatrixXd& X_E,
                             const Lambdas& lambdas = {});

// Soft or hard EM initialized from the supervised fit. Soft mode stops when
// the responsibility update's infinity norm falls below tol; hard mode stops
// at a label fixpoint and returns the lowest-joint-NLL iterate seen. Empty
// unlabelled input returns the supervised fit after one no-op iteration.
EmResult fit_em(const Eigen::MatrixXd& XC_l, const Eigen::VectorXd& y_l,
                const Eigen::MatrixXd& XE_l, const Eigen::MatrixXd& XC_u,
                const Eigen::MatrixXd& XE_u, EmMode mode,
                const Lambdas& lambdas = {}, int max_iter = 100,
                double tol = 1e-6);

// Label 1 iff posterior > threshold; ties go to class 0.
Eigen::VectorXi predict(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                        const Eigen::MatrixXd& X_E, double threshold = 0.5);

}  // namespace cssl
