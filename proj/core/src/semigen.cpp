#include "cssl/semigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cssl/errors.hpp"

namespace cssl {
namespace {

double logsumexp2(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Row-wise log N(x_E; mech(x_C), diag(noise)).
Eigen::VectorXd gaussian_terms(const RidgeParams& mech,
                               const Eigen::VectorXd& noise,
                               const Eigen::MatrixXd& X_C,
                               const Eigen::MatrixXd& X_E) {
  const Eigen::MatrixXd mu = ridge_predict(mech, X_C);
  if (mu.cols() != X_E.cols() || mu.rows() != X_E.rows() ||
      noise.size() != X_E.cols())
    throw DimensionMismatch("semigen: effect dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(X_E.rows());
  for (Eigen::Index j = 0; j < X_E.cols(); ++j) {
    const double var = std::max(noise[j], kVarianceFloor);
    const double c = -0.5 * std::log(2.0 * std::numbers::pi * var);
    out.array() += c - (X_E.col(j) - mu.col(j)).array().square() / (2.0 * var);
  }
  return out;
}

void require_same_rows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows())
    throw DimensionMismatch("semigen: cause/effect row counts disagree");
}

void require_both_classes(const Eigen::VectorXd& y) {
  if (y.sum() <= 0.0 || (1.0 - y.array()).sum() <= 0.0)
    throw SingleClassLabels("both classes must be present");
}

Eigen::MatrixXd vstack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a;
  out.bottomRows(b.rows()) = b;
  return out;
}

Eigen::VectorXd vcat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out.head(a.size()) = a;
  out.tail(b.size()) = b;
  return out;
}

// Shared M-step: logistic prior on soft targets with unit weights, one
// weighted ridge per class, noise from weighted residuals.
SemiGenParams m_step(const Eigen::MatrixXd& X_C, const Eigen::MatrixXd& X_E,
                     const Eigen::VectorXd& targets, const Lambdas& lambdas) {
  const Eigen::VectorXd w1 = targets;
  const Eigen::VectorXd w0 = 1.0 - targets.array();
  SemiGenParams p;
  p.prior = weighted_logistic(X_C, targets,
                              Eigen::VectorXd::Ones(X_C.rows()),
                              lambdas.logistic);
  p.mech0 = weighted_ridge(X_C, X_E, w0, lambdas.ridge);
  p.mech1 = weighted_ridge(X_C, X_E, w1, lambdas.ridge);
  auto noise_for = [&](const RidgeParams& mech, const Eigen::VectorXd& w) {
    const Eigen::MatrixXd resid = X_E - ridge_predict(mech, X_C);
    const double total = w.sum();
    Eigen::VectorXd var(X_E.cols());
    for (Eigen::Index j = 0; j < X_E.cols(); ++j)
      var[j] = w.dot(resid.col(j).cwiseProduct(resid.col(j)).eval()) / total;
    return var.cwiseMax(kVarianceFloor).eval();
  };
  p.noise0 = noise_for(p.mech0, w0);
  p.noise1 = noise_for(p.mech1, w1);
  return p;
}

}  // namespace

double posterior(const SemiGenParams& p, const Eigen::RowVectorXd& x_C,
                 const Eigen::RowVectorXd& x_E) {
  return posterior(p, Eigen::MatrixXd(x_C), Eigen::MatrixXd(x_E))[0];
}

Eigen::VectorXd posterior(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                          const Eigen::MatrixXd& X_E) {
  require_same_rows(X_C, X_E);
  const Eigen::VectorXd z = logistic_logits(p.prior, X_C);
  const Eigen::VectorXd g1 = gaussian_terms(p.mech1, p.noise1, X_C, X_E);
  const Eigen::VectorXd g0 = gaussian_terms(p.mech0, p.noise0, X_C, X_E);
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    out[i] = sigmoid(z[i] + g1[i] - g0[i]);
  return out;
}

double nll(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
           const Eigen::VectorXd& y, const Eigen::MatrixXd& X_E) {
  require_same_rows(X_C, X_E);
  if (y.size() != X_C.rows())
    throw DimensionMismatch("nll: label count mismatch");
  if (X_C.rows() == 0) return 0.0;
  const Eigen::VectorXd z = logistic_logits(p.prior, X_C);
  const Eigen::VectorXd g1 = gaussian_terms(p.mech1, p.noise1, X_C, X_E);
  const Eigen::VectorXd g0 = gaussian_terms(p.mech0, p.noise0, X_C, X_E);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    acc += softplus(z[i]) - y[i] * z[i];            // label term
    acc -= y[i] * g1[i] + (1.0 - y[i]) * g0[i];     // mechanism term
  }
  return acc;
}

double nll_marginal(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                    const Eigen::MatrixXd& X_E) {
  require_same_rows(X_C, X_E);
  if (X_C.rows() == 0) return 0.0;
  const Eigen::VectorXd z = logistic_logits(p.prior, X_C);
  const Eigen::VectorXd g1 = gaussian_terms(p.mech1, p.noise1, X_C, X_E);
  const Eigen::VectorXd g0 = gaussian_terms(p.mech0, p.noise0, X_C, X_E);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double log_p1 = -softplus(-z[i]);
    const double log_p0 = -softplus(z[i]);
    acc -= logsumexp2(log_p1 + g1[i], log_p0 + g0[i]);
  }
  return acc;
}

SemiGenParams fit_supervised(const Eigen::MatrixXd& X_C,
                             const Eigen::VectorXd& y,
                             const Eigen::MatrixXd& X_E,
                             const Lambdas& lambdas) {
  require_same_rows(X_C, X_E);
  if (y.size() != X_C.rows())
    throw DimensionMismatch("fit_supervised: label count mismatch");
  require_both_classes(y);
  return m_step(X_C, X_E, y, lambdas);
}

EmResult fit_em(const Eigen::MatrixXd& XC_l, const Eigen::VectorXd& y_l,
                const Eigen::MatrixXd& XE_l, const Eigen::MatrixXd& XC_u,
                const Eigen::MatrixXd& XE_u, EmMode mode,
                const Lambdas& lambdas, int max_iter, double tol) {
  if (XC_l.cols() != XC_u.cols() && XC_u.rows() > 0)
    throw DimensionMismatch("fit_em: cause dimension mismatch");
  if (XE_l.cols() != XE_u.cols() && XE_u.rows() > 0)
    throw DimensionMismatch("fit_em: effect dimension mismatch");

  const bool hard = mode == EmMode::kHard;
  const Eigen::Index n_u = XC_u.rows();
  // Empty unlabelled blocks may arrive with zero columns; align them so the
  // stacked matrices are well formed.
  const Eigen::MatrixXd XC_u2 =
      n_u > 0 ? XC_u : Eigen::MatrixXd(0, XC_l.cols());
  const Eigen::MatrixXd XE_u2 =
      n_u > 0 ? XE_u : Eigen::MatrixXd(0, XE_l.cols());
  const Eigen::MatrixXd XC_all = vstack(XC_l, XC_u2);
  const Eigen::MatrixXd XE_all = vstack(XE_l, XE_u2);

  SemiGenParams params = fit_supervised(XC_l, y_l, XE_l, lambdas);
  Eigen::VectorXd q = n_u > 0 ? posterior(params, XC_u2, XE_u2)
                              : Eigen::VectorXd(0);

  EmResult result;
  result.trace.mode = mode;
  double best_nll = std::numeric_limits<double>::infinity();

  auto threshold = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i] > 0.5 ? 1.0 : 0.0;
    return out;
  };

  for (int t = 1; t <= max_iter; ++t) {
    const Eigen::VectorXd y_u = hard ? threshold(q) : q;
    const Eigen::VectorXd targets = vcat(y_l, y_u);
    params = m_step(XC_all, XE_all, targets, lambdas);

    Eigen::VectorXd q_new =
        n_u > 0 ? posterior(params, XC_u2, XE_u2) : Eigen::VectorXd(0);

    EmIter rec;
    rec.iteration = t;
    if (hard) {
      rec.nll = nll(params, XC_all, targets, XE_all);
    } else {
      rec.nll = nll(params, XC_l, y_l, XE_l) + nll_marginal(params, XC_u2, XE_u2);
    }
    const Eigen::VectorXd old_hard = threshold(q);
    const Eigen::VectorXd new_hard = threshold(q_new);
    rec.labels_changed = 0;
    for (Eigen::Index i = 0; i < n_u; ++i)
      if (old_hard[i] != new_hard[i]) ++rec.labels_changed;
    rec.max_q_change =
        n_u > 0 ? (q_new - q).lpNorm<Eigen::Infinity>() : 0.0;
    result.trace.iters.push_back(rec);

    if (hard && rec.nll < best_nll) {
      best_nll = rec.nll;
      result.params = params;
      result.q = y_u;
    }

    const bool converged = hard ? rec.labels_changed == 0
                                : rec.max_q_change < tol;
    q = std::move(q_new);
    if (converged) break;
  }

  if (!hard) {
    result.params = params;
    result.q = q;
  }
  return result;
}

Eigen::VectorXi predict(const SemiGenParams& p, const Eigen::MatrixXd& X_C,
                        const Eigen::MatrixXd& X_E, double threshold) {
  const Eigen::VectorXd post = posterior(p, X_C, X_E);
  Eigen::VectorXi out(post.size());
  for (Eigen::Index i = 0; i < post.size(); ++i)
    out[i] = post[i] > threshold ? 1 : 0;
  return out;
}

}  // namespace cssl
