#include "cssl/condself.hpp"

#include <limits>

#include "cssl/errors.hpp"

namespace cssl {
namespace {

void require_same_rows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const char* what) {
  if (a.rows() != b.rows())
    throw DimensionMismatch(std::string("fit_condself: ") + what);
}

}  // namespace

CondSelfResult fit_condself(const Eigen::MatrixXd& XC_l,
                            const Eigen::VectorXd& y_l,
                            const Eigen::MatrixXd& XE_l,
                            const Eigen::MatrixXd& XC_u,
                            const Eigen::MatrixXd& XE_u, double lambda,
                            const RegressFn& regress) {
  require_same_rows(XC_l, XE_l, "labelled cause/effect rows disagree");
  require_same_rows(XC_u, XE_u, "unlabelled cause/effect rows disagree");
  if (y_l.size() != XC_l.rows())
    throw DimensionMismatch("fit_condself: label count mismatch");
  if (y_l.sum() <= 0.0 || (1.0 - y_l.array()).sum() <= 0.0)
    throw SingleClassLabels("both classes must be present among labelled rows");

  const RegressFn fit =
      regress ? regress
              : RegressFn([](const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             const Eigen::VectorXd& w, double lam) {
                  return weighted_ridge(X, Y, w, lam);
                });

  const Eigen::Index n_l = XC_l.rows();
  const Eigen::Index n_u = XC_u.rows();

  CondSelfResult result;
  result.pair.lambda = lambda;
  result.labels = Eigen::VectorXi::Constant(n_u, -1);

  // Stacked row view so class_rows can reference absorbed unlabelled points.
  Eigen::MatrixXd XC(n_l + n_u, XC_l.cols());
  XC.topRows(n_l) = XC_l;
  if (n_u > 0) XC.bottomRows(n_u) = XC_u;
  Eigen::MatrixXd XE(n_l + n_u, XE_l.cols());
  XE.topRows(n_l) = XE_l;
  if (n_u > 0) XE.bottomRows(n_u) = XE_u;

  for (Eigen::Index i = 0; i < n_l; ++i)
    result.pair.class_rows[y_l[i] > 0.5 ? 1 : 0].push_back(i);

  std::vector<Eigen::Index> remaining(static_cast<std::size_t>(n_u));
  for (std::size_t j = 0; j < remaining.size(); ++j)
    remaining[j] = static_cast<Eigen::Index>(j);

  auto refit = [&](int cls) {
    const auto& rows = result.pair.class_rows[cls];
    Eigen::MatrixXd Xc(static_cast<Eigen::Index>(rows.size()), XC.cols());
    Eigen::MatrixXd Xe(static_cast<Eigen::Index>(rows.size()), XE.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      Xc.row(static_cast<Eigen::Index>(k)) = XC.row(rows[k]);
      Xe.row(static_cast<Eigen::Index>(k)) = XE.row(rows[k]);
    }
    return fit(Xc, Xe, Eigen::VectorXd::Ones(Xc.rows()), lambda);
  };

  int step = 0;
  while (!remaining.empty()) {
    result.pair.f0 = refit(0);
    result.pair.f1 = refit(1);

    // Global argmin over (class, still-unlabelled point); scanning class 0
    // first and samples in ascending order realizes the tie-breaking rule.
    double best = std::numeric_limits<double>::infinity();
    int best_cls = 0;
    std::size_t best_pos = 0;
    for (int cls = 0; cls < 2; ++cls) {
      const RidgeParams& f = cls == 0 ? result.pair.f0 : result.pair.f1;
      for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
        const Eigen::Index j = remaining[pos];
        const Eigen::MatrixXd pred = ridge_predict(f, XC_u.row(j));
        const double r = (XE_u.row(j) - pred.row(0)).squaredNorm();
        if (r < best) {
          best = r;
          best_cls = cls;
          best_pos = pos;
        }
      }
    }

    const Eigen::Index j = remaining[best_pos];
    result.labels[j] = best_cls;
    result.pair.class_rows[best_cls].push_back(n_l + j);
    remaining.erase(remaining.begin() +
                    static_cast<std::ptrdiff_t>(best_pos));
    result.trace.steps.push_back({++step, best_cls, j, best});
  }

  // Final refit so the returned pair reflects every absorbed point.
  result.pair.f0 = refit(0);
  result.pair.f1 = refit(1);
  return result;
}

Eigen::VectorXi predict_condself(const MechanismPair& pair,
                                 const Eigen::MatrixXd& X_C,
                                 const Eigen::MatrixXd& X_E) {
  if (X_C.rows() != X_E.rows())
    throw DimensionMismatch("predict_condself: row counts disagree");
  const Eigen::MatrixXd p0 = ridge_predict(pair.f0, X_C);
  const Eigen::MatrixXd p1 = ridge_predict(pair.f1, X_C);
  if (p0.cols() != X_E.cols() || p1.cols() != X_E.cols())
    throw DimensionMismatch("predict_condself: effect dimension mismatch");
  Eigen::VectorXi out(X_C.rows());
  for (Eigen::Index i = 0; i < X_C.rows(); ++i) {
    const double r0 = (X_E.row(i) - p0.row(i)).squaredNorm();
    const double r1 = (X_E.row(i) - p1.row(i)).squaredNorm();
    out[i] = r1 < r0 ? 1 : 0;  // ties to class 0
  }
  return out;
}

}  // namespace cssl
