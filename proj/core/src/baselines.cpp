#include "cssl/baselines.hpp"

#include "cssl/errors.hpp"

namespace cssl {
namespace {

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

}  // namespace

LogisticParams fit_supervised_logreg(const Eigen::MatrixXd& XC_l,
                                     const Eigen::MatrixXd& XE_l,
                                     const Eigen::VectorXd& y_l,
                                     double lambda) {
  if (XC_l.rows() != XE_l.rows())
    throw DimensionMismatch("fit_supervised_logreg: row counts disagree");
  if (y_l.sum() <= 0.0 || (1.0 - y_l.array()).sum() <= 0.0)
    throw SingleClassLabels("both classes must be present");
  const Eigen::MatrixXd Z = hcat(XC_l, XE_l);
  return weighted_logistic(Z, y_l, Eigen::VectorXd::Ones(Z.rows()), lambda);
}

Eigen::VectorXi predict_logreg(const LogisticParams& params,
                               const Eigen::MatrixXd& X_C,
                               const Eigen::MatrixXd& X_E) {
  const Eigen::VectorXd p = logistic_probs(params, hcat(X_C, X_E));
  Eigen::VectorXi out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = p[i] > 0.5 ? 1 : 0;
  return out;
}

LabelPropResult fit_label_propagation(const Eigen::MatrixXd& Z_l,
                                      const Eigen::VectorXd& y_l,
                                      const Eigen::MatrixXd& Z_u,
                                      const LabelPropConfig& cfg) {
  if (Z_l.rows() < 1) throw TooFewRows("label propagation needs labelled rows");
  if (Z_l.rows() != y_l.size())
    throw DimensionMismatch("fit_label_propagation: label count mismatch");
  if (Z_u.rows() > 0 && Z_u.cols() != Z_l.cols())
    throw DimensionMismatch("fit_label_propagation: feature dim mismatch");
  if (cfg.gamma <= 0.0) throw ConfigError("label propagation: gamma must be > 0");

  const Eigen::Index n_l = Z_l.rows();
  const Eigen::Index n_u = Z_u.rows();
  const Eigen::Index n = n_l + n_u;

  Eigen::MatrixXd Z(n, Z_l.cols());
  Z.topRows(n_l) = Z_l;
  if (n_u > 0) Z.bottomRows(n_u) = Z_u;

  // Affinities with a zero diagonal; rows normalized to a stochastic sweep
  // matrix (rows with no mass stay zero).
  Eigen::MatrixXd T(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      T(i, j) = i == j ? 0.0
                       : std::exp(-cfg.gamma *
                                  (Z.row(i) - Z.row(j)).squaredNorm());
    const double rs = T.row(i).sum();
    if (rs > 0.0) T.row(i) /= rs;
  }

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n_l, 2);
  for (Eigen::Index i = 0; i < n_l; ++i) onehot(i, y_l[i] > 0.5 ? 1 : 0) = 1.0;

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, 2);
  F.topRows(n_l) = onehot;

  LabelPropResult result;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Eigen::MatrixXd F_prev = F;
    F = T * F;
    F.topRows(n_l) = onehot;  // clamp labelled rows every sweep
    result.iterations = it + 1;
    if ((F - F_prev).cwiseAbs().sum() < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const double rs = F.row(i).sum();
    if (rs > 0.0) F.row(i) /= rs;
  }

  result.labels.resize(n_u);
  for (Eigen::Index i = 0; i < n_u; ++i)
    result.labels[i] = F(n_l + i, 1) > F(n_l + i, 0) ? 1 : 0;
  result.F = std::move(F);
  return result;
}

}  // namespace cssl
