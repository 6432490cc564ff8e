#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "cssl/dataset.hpp"
#include "cssl/rng.hpp"
#include "cssl/semigen.hpp"

namespace cssl {

struct MixtureComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd variances;  // diagonal covariance
};

// Full SCM specification: X_C ~ mixture, Y | X_C ~ Bernoulli(sigma(a.x + b)),
// X_E | X_C, Y=i ~ N(A_i x_C + b_i, diag(D_i^2)). D entries are standard
// deviations.
struct SynthConfig {
  std::vector<MixtureComponent> mixture;
  Eigen::VectorXd a;
  double b = 0.0;
  Eigen::MatrixXd A0, A1;  // d_E x d_C
  Eigen::VectorXd b0, b1;
  Eigen::VectorXd D0, D1;

  Eigen::Index d_causes() const { return a.size(); }
  Eigen::Index d_effects() const { return b0.size(); }
  void validate() const;  // throws ConfigError
};

// S1, S2, S3 parameter sets.
SynthConfig preset(std::string_view name);

// Fully labelled dataset; per row the draw order is fixed: mixture component
// (one uniform), x_C (d_C normals), u (one uniform), eps (d_E normals), with
// y = 1 iff sigma(a.x_C + b) > u.
Dataset generate(const SynthConfig& cfg, Eigen::Index n, Rng& rng);

// True-parameter view of the config for posterior evaluation.
SemiGenParams to_semigen_params(const SynthConfig& cfg);

// Exact Bayes posterior under cfg; shares the log-space formula and code path
// with posterior().
double oracle_posterior(const SynthConfig& cfg, const Eigen::RowVectorXd& x_C,
                        const Eigen::RowVectorXd& x_E);

}  // namespace cssl
