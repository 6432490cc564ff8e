#pragma once

#include <Eigen/Dense>

namespace cssl {

inline constexpr double kVarianceFloor = 1e-6;

// Coefficients of a (possibly multi-output) linear map. When fitted with
// intercept augmentation, coef has d+1 rows and the last row is the intercept;
// ridge_predict dispatches on the row count.
struct RidgeParams {
  Eigen::MatrixXd coef;  // (d or d+1) x k
};

struct LogisticParams {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};

struct DiagGaussian {
  DiagGaussian() = default;
  DiagGaussian(Eigen::VectorXd mean_, Eigen::VectorXd variances_);

  Eigen::VectorXd mean;
  Eigen::VectorXd variances;  // floored at kVarianceFloor on construction
};

// argmin_Theta sum_i w_i ||y_i - Theta^T x~_i||^2 + lambda ||Theta||_F^2 where
// x~ appends a trailing 1 when augment_intercept is set. The penalty covers
// every coefficient, intercept row included.
RidgeParams weighted_ridge(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                           const Eigen::VectorXd& weights, double lambda,
                           bool augment_intercept = true);

Eigen::MatrixXd ridge_predict(const RidgeParams& params,
                              const Eigen::MatrixXd& X);

// Penalized weighted cross-entropy with soft targets in [0,1]:
//   min sum_i w_i CE(y_i, sigma(w.x_i + b)) + (lambda/2) ||w||^2
// Newton/IRLS with step halving; the intercept is unpenalized. Converged when
// the gradient infinity norm drops below tol (default 1e-8) or after max_iter.
LogisticParams weighted_logistic(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& weights, double lambda,
                                 int max_iter = 100, double tol = 1e-8);

double logistic_logit(const LogisticParams& params,
                      const Eigen::RowVectorXd& x);
Eigen::VectorXd logistic_logits(const LogisticParams& params,
                                const Eigen::MatrixXd& X);
Eigen::VectorXd logistic_probs(const LogisticParams& params,
                               const Eigen::MatrixXd& X);

// log N(x; mean, diag(variances)).
double log_density(const DiagGaussian& g, const Eigen::VectorXd& x);

double sigmoid(double z);
// log(1 + e^z) without overflow.
double softplus(double z);

}  // namespace cssl
