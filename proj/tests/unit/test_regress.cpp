#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cssl/errors.hpp"
#include "cssl/regress.hpp"
#include "cssl/rng.hpp"
#include "doctest.h"

namespace {

Eigen::MatrixXd random_matrix(cssl::Rng& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Eigen::MatrixXd with_ones(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xa(X.rows(), X.cols() + 1);
  Xa.leftCols(X.cols()) = X;
  Xa.col(X.cols()).setOnes();
  return Xa;
}

double ridge_objective(const Eigen::MatrixXd& Xa, const Eigen::MatrixXd& Y,
                       const Eigen::VectorXd& w, double lambda,
                       const Eigen::MatrixXd& Th) {
  const Eigen::MatrixXd R = Y - Xa * Th;
  double obj = lambda * Th.squaredNorm();
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    obj += w[i] * R.row(i).squaredNorm();
  return obj;
}

// Plain gradient descent on the ridge objective; independent of the library's
// normal-equation solve.
Eigen::MatrixXd ridge_gd(const Eigen::MatrixXd& Xa, const Eigen::MatrixXd& Y,
                         const Eigen::VectorXd& w, double lambda, double lr,
                         int iters) {
  Eigen::MatrixXd Th = Eigen::MatrixXd::Zero(Xa.cols(), Y.cols());
  for (int it = 0; it < iters; ++it) {
    const Eigen::MatrixXd R = Y - Xa * Th;
    const Eigen::MatrixXd G =
        -2.0 * Xa.transpose() * (w.asDiagonal() * R) + 2.0 * lambda * Th;
    Th -= lr * G;
  }
  return Th;
}

struct LogisticOracle {
  Eigen::VectorXd w;
  double b = 0.0;
};

// Gradient descent on the penalized weighted cross-entropy (intercept
// unpenalized), as a solver-independent reference.
LogisticOracle logistic_gd(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& wt, double lambda, double lr,
                           int iters) {
  LogisticOracle o;
  o.w = Eigen::VectorXd::Zero(X.cols());
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd z = (X * o.w).array() + o.b;
    Eigen::VectorXd p(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) p[i] = cssl::sigmoid(z[i]);
    const Eigen::VectorXd r = wt.cwiseProduct(p - y);
    const Eigen::VectorXd gw = X.transpose() * r + lambda * o.w;
    const double gb = r.sum();
    o.w -= lr * gw;
    o.b -= lr * gb;
  }
  return o;
}

}  // namespace

TEST_SUITE("regress") {

TEST_CASE("scalar ridge closed form without intercept augmentation") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const Eigen::MatrixXd Y = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  const cssl::RidgeParams p = cssl::weighted_ridge(X, Y, w, 1.0, false);
  REQUIRE(p.coef.rows() == 1);
  CHECK(std::abs(p.coef(0, 0) - 0.5) < 1e-15);
}

TEST_CASE("all-zero weights leave only the penalty, so coefficients vanish") {
  cssl::Rng rng(1);
  const Eigen::MatrixXd X = random_matrix(rng, 8, 3);
  const Eigen::MatrixXd Y = random_matrix(rng, 8, 2);
  const cssl::RidgeParams p =
      cssl::weighted_ridge(X, Y, Eigen::VectorXd::Zero(8), 1.0);
  CHECK(p.coef.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ridge matches a gradient-descent minimizer") {
  cssl::Rng rng(2);
  const Eigen::MatrixXd X = random_matrix(rng, 20, 3);
  const Eigen::MatrixXd Y = random_matrix(rng, 20, 2);
  Eigen::VectorXd w(20);
  for (Eigen::Index i = 0; i < 20; ++i) w[i] = 0.2 + rng.uniform();
  const cssl::RidgeParams p = cssl::weighted_ridge(X, Y, w, 1.0);
  const Eigen::MatrixXd oracle =
      ridge_gd(with_ones(X), Y, w, 1.0, 5e-3, 200000);
  CHECK((p.coef - oracle).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("ridge stationarity: finite differences vanish at the solution") {
  cssl::Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto n = static_cast<Eigen::Index>(8 + rng.below(20));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(4));
    const auto k = static_cast<Eigen::Index>(1 + rng.below(3));
    const Eigen::MatrixXd X = random_matrix(rng, n, d);
    const Eigen::MatrixXd Y = random_matrix(rng, n, k);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.1 + 2.0 * rng.uniform();
    const double lambda = rep % 2 == 0 ? 1.0 : 0.1;
    const cssl::RidgeParams p = cssl::weighted_ridge(X, Y, w, lambda);
    const Eigen::MatrixXd Xa = with_ones(X);
    const double h = 1e-6;
    double worst = 0.0;
    for (Eigen::Index a = 0; a < p.coef.rows(); ++a)
      for (Eigen::Index b = 0; b < p.coef.cols(); ++b) {
        Eigen::MatrixXd up = p.coef, dn = p.coef;
        up(a, b) += h;
        dn(a, b) -= h;
        const double g = (ridge_objective(Xa, Y, w, lambda, up) -
                          ridge_objective(Xa, Y, w, lambda, dn)) /
                         (2.0 * h);
        worst = std::max(worst, std::abs(g));
      }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("ridge penalty monotonicity over a lambda grid") {
  cssl::Rng rng(4);
  const Eigen::MatrixXd X = random_matrix(rng, 15, 3);
  const Eigen::MatrixXd Y = random_matrix(rng, 15, 2);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(15);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double norm = cssl::weighted_ridge(X, Y, w, lambda).coef.squaredNorm();
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
}

TEST_CASE("ridge error cases") {
  cssl::Rng rng(5);
  Eigen::MatrixXd X = random_matrix(rng, 6, 2);
  const Eigen::MatrixXd Y = random_matrix(rng, 6, 1);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(6);

  SUBCASE("non-finite input") {
    X(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cssl::weighted_ridge(X, Y, w, 1.0), cssl::NonFiniteInput);
  }
  SUBCASE("negative weight") {
    Eigen::VectorXd bad = w;
    bad[0] = -1.0;
    CHECK_THROWS_AS(cssl::weighted_ridge(X, Y, bad, 1.0),
                    cssl::NonFiniteInput);
  }
  SUBCASE("singular system at lambda zero") {
    Eigen::MatrixXd Xs(6, 2);
    Xs.col(0) = X.col(0);
    Xs.col(1) = 2.0 * X.col(0);  // exactly collinear
    CHECK_THROWS_AS(cssl::weighted_ridge(Xs, Y, w, 0.0, false),
                    cssl::SingularSystem);
  }
  SUBCASE("row count mismatch") {
    CHECK_THROWS_AS(
        cssl::weighted_ridge(X, Y, Eigen::VectorXd::Ones(5), 1.0),
        cssl::DimensionMismatch);
  }
}

TEST_CASE("ridge_predict dispatches on the intercept row") {
  cssl::Rng rng(6);
  const Eigen::MatrixXd X = random_matrix(rng, 5, 2);
  cssl::RidgeParams no_int;
  no_int.coef = random_matrix(rng, 2, 1);
  CHECK((cssl::ridge_predict(no_int, X) - X * no_int.coef)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  cssl::RidgeParams with_int;
  with_int.coef = random_matrix(rng, 3, 1);
  const Eigen::MatrixXd expect =
      (X * with_int.coef.topRows(2)).rowwise() + with_int.coef.row(2);
  CHECK((cssl::ridge_predict(with_int, X) - expect).cwiseAbs().maxCoeff() ==
        0.0);

  cssl::RidgeParams bad;
  bad.coef = random_matrix(rng, 5, 1);
  CHECK_THROWS_AS(cssl::ridge_predict(bad, X), cssl::DimensionMismatch);
}

TEST_CASE("logistic symmetry: uninformative targets give the zero solution") {
  cssl::Rng rng(7);
  const Eigen::MatrixXd X = random_matrix(rng, 12, 3);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(12, 0.5);
  const cssl::LogisticParams p =
      cssl::weighted_logistic(X, y, Eigen::VectorXd::Ones(12), 1.0);
  CHECK(p.weights.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(p.intercept) < 1e-8);
}

TEST_CASE("logistic matches a numeric optimizer on the separable pair") {
  Eigen::MatrixXd X(2, 1);
  X << -1.0, 1.0;
  Eigen::VectorXd y(2);
  y << 0.0, 1.0;
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
  const cssl::LogisticParams p = cssl::weighted_logistic(X, y, w, 1.0);
  const LogisticOracle o = logistic_gd(X, y, w, 1.0, 0.2, 200000);
  CHECK(std::abs(p.weights[0] - o.w[0]) < 1e-5);
  CHECK(std::abs(p.intercept - o.b) < 1e-5);
}

TEST_CASE("logistic weight linearity: duplicated rows at half weight") {
  cssl::Rng rng(8);
  const Eigen::MatrixXd X = random_matrix(rng, 10, 2);
  Eigen::VectorXd y(10);
  for (Eigen::Index i = 0; i < 10; ++i) y[i] = rng.uniform();
  const cssl::LogisticParams base =
      cssl::weighted_logistic(X, y, Eigen::VectorXd::Ones(10), 1.0);

  Eigen::MatrixXd X2(20, 2);
  X2 << X, X;
  Eigen::VectorXd y2(20);
  y2 << y, y;
  const cssl::LogisticParams dup = cssl::weighted_logistic(
      X2, y2, Eigen::VectorXd::Constant(20, 0.5), 1.0);
  CHECK((base.weights - dup.weights).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(base.intercept - dup.intercept) < 1e-10);
}

TEST_CASE("logistic stationarity: analytic gradient vanishes") {
  cssl::Rng rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto n = static_cast<Eigen::Index>(10 + rng.below(30));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(4));
    const Eigen::MatrixXd X = random_matrix(rng, n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.uniform();
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.2 + rng.uniform();
    const cssl::LogisticParams p = cssl::weighted_logistic(X, y, w, 1.0);

    Eigen::VectorXd z = (X * p.weights).array() + p.intercept;
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s[i] = cssl::sigmoid(z[i]);
    const Eigen::VectorXd r = w.cwiseProduct(s - y);
    const Eigen::VectorXd gw = X.transpose() * r + 1.0 * p.weights;
    CHECK(gw.cwiseAbs().maxCoeff() < 1e-7);
    CHECK(std::abs(r.sum()) < 1e-7);
  }
}

TEST_CASE("joint row permutation leaves both fits unchanged") {
  cssl::Rng rng(10);
  const Eigen::Index n = 14;
  const Eigen::MatrixXd X = random_matrix(rng, n, 3);
  const Eigen::MatrixXd Y = random_matrix(rng, n, 2);
  Eigen::VectorXd yl(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    yl[i] = rng.uniform();
    w[i] = 0.3 + rng.uniform();
  }
  std::vector<Eigen::Index> perm{13, 4, 7, 0, 11, 2, 9, 6, 1, 12, 5, 10, 3, 8};
  Eigen::MatrixXd Xp(n, 3), Yp(n, 2);
  Eigen::VectorXd ylp(n), wp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Xp.row(i) = X.row(perm[i]);
    Yp.row(i) = Y.row(perm[i]);
    ylp[i] = yl[perm[i]];
    wp[i] = w[perm[i]];
  }

  const auto r1 = cssl::weighted_ridge(X, Y, w, 1.0);
  const auto r2 = cssl::weighted_ridge(Xp, Yp, wp, 1.0);
  CHECK((r1.coef - r2.coef).cwiseAbs().maxCoeff() < 1e-10);

  const auto l1 = cssl::weighted_logistic(X, yl, w, 1.0);
  const auto l2 = cssl::weighted_logistic(Xp, ylp, wp, 1.0);
  CHECK((l1.weights - l2.weights).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(l1.intercept - l2.intercept) < 1e-10);
}

TEST_CASE("logistic error cases") {
  cssl::Rng rng(11);
  const Eigen::MatrixXd X = random_matrix(rng, 5, 2);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 0.5);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(5);

  CHECK_THROWS_AS(
      cssl::weighted_logistic(X, y, Eigen::VectorXd::Zero(5), 1.0),
      cssl::NoPositiveWeights);
  y[1] = 1.5;
  CHECK_THROWS_AS(cssl::weighted_logistic(X, y, w, 1.0),
                  cssl::NonFiniteInput);
}

TEST_CASE("log_density closed-form values") {
  const cssl::DiagGaussian g(Eigen::VectorXd::Zero(1),
                             Eigen::VectorXd::Ones(1));
  CHECK(std::abs(cssl::log_density(g, Eigen::VectorXd::Zero(1)) -
                 -0.9189385332046727) < 1e-12);
  CHECK(std::abs(cssl::log_density(g, Eigen::VectorXd::Constant(1, 2.0)) -
                 -2.9189385332046727) < 1e-12);
}

TEST_CASE("log_density equals the product of per-coordinate densities") {
  cssl::Rng rng(12);
  Eigen::VectorXd mean(3), var(3), x(3);
  for (int j = 0; j < 3; ++j) {
    mean[j] = rng.normal();
    var[j] = 0.2 + rng.uniform();
    x[j] = rng.normal();
  }
  const cssl::DiagGaussian g(mean, var);
  double product = 1.0;
  for (int j = 0; j < 3; ++j)
    product *= std::exp(-(x[j] - mean[j]) * (x[j] - mean[j]) / (2.0 * var[j])) /
               std::sqrt(2.0 * std::numbers::pi * var[j]);
  CHECK(std::abs(cssl::log_density(g, x) - std::log(product)) < 1e-12);

  CHECK_THROWS_AS(cssl::log_density(g, Eigen::VectorXd::Zero(2)),
                  cssl::DimensionMismatch);
}

TEST_CASE("DiagGaussian floors tiny variances") {
  const cssl::DiagGaussian g(Eigen::VectorXd::Zero(2),
                             Eigen::VectorXd::Constant(2, 1e-12));
  CHECK(g.variances[0] == 1e-6);
  CHECK(g.variances[1] == 1e-6);
}

}  // TEST_SUITE
