#include "cssl/regress.hpp"

#include <cmath>
#include <numbers>

#include "cssl/errors.hpp"

namespace cssl {
namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteInput(std::string(what) + " not finite");
}

void require_weights(const Eigen::VectorXd& w) {
  if (!w.allFinite() || (w.array() < 0.0).any())
    throw NonFiniteInput("weights must be finite and nonnegative");
}

Eigen::MatrixXd augment(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xa(X.rows(), X.cols() + 1);
  Xa.leftCols(X.cols()) = X;
  Xa.col(X.cols()).setOnes();
  return Xa;
}

}  // namespace

DiagGaussian::DiagGaussian(Eigen::VectorXd mean_, Eigen::VectorXd variances_)
    : mean(std::move(mean_)), variances(std::move(variances_)) {
  if (mean.size() != variances.size())
    throw DimensionMismatch("DiagGaussian: mean/variance size mismatch");
  variances = variances.cwiseMax(kVarianceFloor);
}

RidgeParams weighted_ridge(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                           const Eigen::VectorXd& weights, double lambda,
                           bool augment_intercept) {
  require_finite(X, "X");
  require_finite(Y, "Y");
  require_weights(weights);
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw NonFiniteInput("lambda must be finite and nonnegative");
  if (X.rows() != Y.rows() || X.rows() != weights.size())
    throw DimensionMismatch("weighted_ridge: row counts disagree");

  const Eigen::MatrixXd Xa = augment_intercept ? augment(X) : X;
  const Eigen::MatrixXd Xw = weights.asDiagonal() * Xa;
  Eigen::MatrixXd normal = Xa.transpose() * Xw;
  normal.diagonal().array() += lambda;
  const Eigen::MatrixXd rhs = Xa.transpose() * (weights.asDiagonal() * Y);

  RidgeParams out;
  if (lambda > 0.0) {
    out.coef = Eigen::LLT<Eigen::MatrixXd>(normal).solve(rhs);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    if (!lu.isInvertible())
      throw SingularSystem("weighted_ridge: rank-deficient system at lambda=0");
    out.coef = lu.solve(rhs);
  }
  if (!out.coef.allFinite())
    throw SingularSystem("weighted_ridge: solve produced non-finite values");
  return out;
}

Eigen::MatrixXd ridge_predict(const RidgeParams& params,
                              const Eigen::MatrixXd& X) {
  if (params.coef.rows() == X.cols()) return X * params.coef;
  if (params.coef.rows() == X.cols() + 1)
    return (X * params.coef.topRows(X.cols())).rowwise() +
           params.coef.bottomRows(1).row(0);
  throw DimensionMismatch("ridge_predict: coefficient/input shape mismatch");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

namespace {

// Penalized objective; the intercept (last entry of beta) is unpenalized.
double logistic_objective(const Eigen::MatrixXd& Xa, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, double lambda,
                          const Eigen::VectorXd& beta) {
  const Eigen::VectorXd z = Xa * beta;
  double obj = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    obj += w[i] * (softplus(z[i]) - y[i] * z[i]);
  obj += 0.5 * lambda * beta.head(beta.size() - 1).squaredNorm();
  return obj;
}

}  // namespace

LogisticParams weighted_logistic(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& weights, double lambda,
                                 int max_iter, double tol) {
  require_finite(X, "X");
  require_weights(weights);
  if (!y.allFinite() || (y.array() < 0.0).any() || (y.array() > 1.0).any())
    throw NonFiniteInput("targets must lie in [0,1]");
  if (X.rows() != y.size() || X.rows() != weights.size())
    throw DimensionMismatch("weighted_logistic: row counts disagree");
  if (X.rows() < 1 || (weights.array() <= 0.0).all())
    throw NoPositiveWeights("at least one strictly positive weight required");

  const Eigen::MatrixXd Xa = augment(X);
  const Eigen::Index d = Xa.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd penalty_mask = Eigen::VectorXd::Ones(d);
  penalty_mask[d - 1] = 0.0;  // intercept unpenalized

  double obj = logistic_objective(Xa, y, weights, lambda, beta);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd z = Xa * beta;
    Eigen::VectorXd p(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) p[i] = sigmoid(z[i]);

    Eigen::VectorXd grad =
        Xa.transpose() * (weights.cwiseProduct(p - y)) +
        lambda * penalty_mask.cwiseProduct(beta);
    if (grad.lpNorm<Eigen::Infinity>() < tol) break;

    const Eigen::VectorXd v =
        weights.cwiseProduct(p.cwiseProduct(Eigen::VectorXd::Ones(p.size()) - p));
    Eigen::MatrixXd hess = Xa.transpose() * v.asDiagonal() * Xa;
    hess.diagonal() += lambda * penalty_mask;
    if (lambda == 0.0) hess.diagonal().array() += 1e-12;

    Eigen::VectorXd step = Eigen::LDLT<Eigen::MatrixXd>(hess).solve(-grad);
    if (!step.allFinite()) break;

    // Step halving keeps Newton from overshooting on near-separable data.
    double scale = 1.0;
    for (int h = 0; h < 40; ++h) {
      const Eigen::VectorXd cand = beta + scale * step;
      const double cand_obj = logistic_objective(Xa, y, weights, lambda, cand);
      if (cand_obj <= obj + 1e-12) {
        beta = cand;
        obj = cand_obj;
        break;
      }
      scale *= 0.5;
    }
  }

  LogisticParams out;
  out.weights = beta.head(d - 1);
  out.intercept = beta[d - 1];
  return out;
}

double logistic_logit(const LogisticParams& params,
                      const Eigen::RowVectorXd& x) {
  if (x.size() != params.weights.size())
    throw DimensionMismatch("logistic_logit: dimension mismatch");
  return x.dot(params.weights.transpose()) + params.intercept;
}

Eigen::VectorXd logistic_logits(const LogisticParams& params,
                                const Eigen::MatrixXd& X) {
  if (X.cols() != params.weights.size())
    throw DimensionMismatch("logistic_logits: dimension mismatch");
  return (X * params.weights).array() + params.intercept;
}

Eigen::VectorXd logistic_probs(const LogisticParams& params,
                               const Eigen::MatrixXd& X) {
  Eigen::VectorXd z = logistic_logits(params, X);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

double log_density(const DiagGaussian& g, const Eigen::VectorXd& x) {
  if (x.size() != g.mean.size())
    throw DimensionMismatch("log_density: dimension mismatch");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double var = g.variances[j];
    const double diff = x[j] - g.mean[j];
    acc += -0.5 * std::log(2.0 * std::numbers::pi * var) -
           diff * diff / (2.0 * var);
  }
  return acc;
}

}  // namespace cssl
