#include "cssl/synth.hpp"

#include <cmath>

#include "cssl/errors.hpp"

namespace cssl {
namespace {

MixtureComponent comp(double w, std::initializer_list<double> mean,
                      std::initializer_list<double> var) {
  MixtureComponent c;
  c.weight = w;
  c.mean = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
      mean.begin(), static_cast<Eigen::Index>(mean.size())));
  c.variances = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
      var.begin(), static_cast<Eigen::Index>(var.size())));
  return c;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  return Eigen::Map<const Eigen::VectorXd>(
      v.begin(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void SynthConfig::validate() const {
  if (mixture.empty()) throw ConfigError("synth config: empty mixture");
  double total = 0.0;
  const auto d_C = d_causes();
  for (const auto& c : mixture) {
    if (c.weight < 0.0) throw ConfigError("synth config: negative weight");
    if (c.mean.size() != d_C || c.variances.size() != d_C)
      throw ConfigError("synth config: mixture dimension mismatch");
    if ((c.variances.array() < 0.0).any())
      throw ConfigError("synth config: negative variance");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("synth config: mixture weights must sum to 1");
  const auto d_E = d_effects();
  if (A0.rows() != d_E || A0.cols() != d_C || A1.rows() != d_E ||
      A1.cols() != d_C || b1.size() != d_E || D0.size() != d_E ||
      D1.size() != d_E)
    throw ConfigError("synth config: effect dimension mismatch");
  if ((D0.array() <= 0.0).any() || (D1.array() <= 0.0).any())
    throw ConfigError("synth config: noise scales must be positive");
}

SynthConfig preset(std::string_view name) {
  SynthConfig cfg;
  if (name == "s1") {
    // Sigma entries are standard deviations of 0.5, so variance 0.25.
    cfg.mixture = {comp(0.3, {-5.0}, {0.25}), comp(0.4, {0.0}, {0.25}),
                   comp(0.3, {5.0}, {0.25})};
    cfg.a = vec({0.5});
    cfg.b = 0.0;
    cfg.A0 = Eigen::MatrixXd::Constant(1, 1, 1.0);
    cfg.A1 = Eigen::MatrixXd::Constant(1, 1, 1.0);
    cfg.b0 = vec({2.0});
    cfg.b1 = vec({-2.0});
    cfg.D0 = vec({0.25});
    cfg.D1 = vec({0.25});
  } else if (name == "s2") {
    cfg.mixture = {comp(0.5, {-3.0}, {0.5}), comp(0.5, {3.0}, {0.5})};
    cfg.a = vec({0.5});
    cfg.b = 0.0;
    cfg.A0 = Eigen::MatrixXd::Constant(1, 1, 0.5);
    cfg.A1 = Eigen::MatrixXd::Constant(1, 1, -0.5);
    cfg.b0 = vec({0.0});
    cfg.b1 = vec({0.0});
    cfg.D0 = vec({0.25});
    cfg.D1 = vec({0.25});
  } else if (name == "s3") {
    cfg.mixture = {comp(0.5, {-3.0, -3.0}, {0.5, 0.5}),
                   comp(0.5, {3.0, 3.0}, {0.5, 0.5})};
    cfg.a = vec({0.5, 0.5});
    cfg.b = 0.0;
    cfg.A0 = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    cfg.A1 = -0.5 * Eigen::MatrixXd::Identity(2, 2);
    cfg.b0 = vec({0.0, 0.0});
    cfg.b1 = vec({0.0, 0.0});
    cfg.D0 = vec({0.25, 0.25});
    cfg.D1 = vec({0.25, 0.25});
  } else {
    throw UnknownPreset(std::string(name));
  }
  cfg.validate();
  return cfg;
}

Dataset generate(const SynthConfig& cfg, Eigen::Index n, Rng& rng) {
  cfg.validate();
  if (n < 1) throw ConfigError("generate: n must be at least 1");
  const auto d_C = cfg.d_causes();
  const auto d_E = cfg.d_effects();

  Dataset ds;
  ds.causes.resize(n, d_C);
  ds.effects.resize(n, d_E);
  ds.labels.resize(n);
  for (Eigen::Index j = 0; j < d_C; ++j)
    ds.cause_names.push_back("xc_" + std::to_string(j));
  for (Eigen::Index j = 0; j < d_E; ++j)
    ds.effect_names.push_back("xe_" + std::to_string(j));

  for (Eigen::Index i = 0; i < n; ++i) {
    // Fixed per-row draw order: component, x_C, u, eps.
    const double cu = rng.uniform();
    std::size_t k = 0;
    double cdf = 0.0;
    for (; k < cfg.mixture.size(); ++k) {
      cdf += cfg.mixture[k].weight;
      if (cu < cdf) break;
    }
    if (k == cfg.mixture.size()) k = cfg.mixture.size() - 1;

    const auto& mc = cfg.mixture[k];
    Eigen::VectorXd x_C(d_C);
    for (Eigen::Index j = 0; j < d_C; ++j)
      x_C[j] = mc.mean[j] + std::sqrt(mc.variances[j]) * rng.normal();

    const double u = rng.uniform();
    const int y = sigmoid(cfg.a.dot(x_C) + cfg.b) > u ? 1 : 0;

    Eigen::VectorXd eps(d_E);
    for (Eigen::Index j = 0; j < d_E; ++j) eps[j] = rng.normal();

    const Eigen::MatrixXd& A = y == 1 ? cfg.A1 : cfg.A0;
    const Eigen::VectorXd& bv = y == 1 ? cfg.b1 : cfg.b0;
    const Eigen::VectorXd& D = y == 1 ? cfg.D1 : cfg.D0;

    ds.causes.row(i) = x_C.transpose();
    ds.effects.row(i) = (A * x_C + bv + D.cwiseProduct(eps)).transpose();
    ds.labels[i] = y;
  }
  return ds;
}

SemiGenParams to_semigen_params(const SynthConfig& cfg) {
  SemiGenParams p;
  p.prior.weights = cfg.a;
  p.prior.intercept = cfg.b;
  const auto d_C = cfg.d_causes();
  const auto d_E = cfg.d_effects();
  p.mech0.coef.resize(d_C + 1, d_E);
  p.mech0.coef.topRows(d_C) = cfg.A0.transpose();
  p.mech0.coef.bottomRows(1) = cfg.b0.transpose();
  p.mech1.coef.resize(d_C + 1, d_E);
  p.mech1.coef.topRows(d_C) = cfg.A1.transpose();
  p.mech1.coef.bottomRows(1) = cfg.b1.transpose();
  p.noise0 = cfg.D0.cwiseProduct(cfg.D0).cwiseMax(kVarianceFloor);
  p.noise1 = cfg.D1.cwiseProduct(cfg.D1).cwiseMax(kVarianceFloor);
  return p;
}

double oracle_posterior(const SynthConfig& cfg, const Eigen::RowVectorXd& x_C,
                        const Eigen::RowVectorXd& x_E) {
  return posterior(to_semigen_params(cfg), x_C, x_E);
}

}  // namespace cssl
