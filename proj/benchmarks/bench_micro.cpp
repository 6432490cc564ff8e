#include <benchmark/benchmark.h>

#include "cssl/baselines.hpp"
#include "cssl/condself.hpp"
#include "cssl/dataset.hpp"
#include "cssl/regress.hpp"
#include "cssl/semigen.hpp"
#include "cssl/synth.hpp"

namespace {

struct Instance {
  Eigen::MatrixXd XC_l, XE_l, XC_u, XE_u;
  Eigen::VectorXd y_l;
};

// Protocol-sized S1 instance (10 labelled / 200 unlabelled).
Instance make_instance() {
  cssl::Rng rng(7);
  const cssl::Dataset ds = cssl::generate(cssl::preset("s1"), 210, rng);
  cssl::Rng rng2(7);
  cssl::Dataset ds2 = ds;
  const cssl::Split split = cssl::sample_split(ds2, 10, 200, rng2);
  Instance in;
  in.XC_l = cssl::take_rows(ds.causes, split.labelled_idx);
  in.XE_l = cssl::take_rows(ds.effects, split.labelled_idx);
  in.XC_u = cssl::take_rows(ds.causes, split.unlabelled_idx);
  in.XE_u = cssl::take_rows(ds.effects, split.unlabelled_idx);
  in.y_l.resize(static_cast<Eigen::Index>(split.labelled_idx.size()));
  for (Eigen::Index i = 0; i < in.y_l.size(); ++i)
    in.y_l[i] = ds.labels[split.labelled_idx[static_cast<std::size_t>(i)]];
  return in;
}

void BM_Generate(benchmark::State& state) {
  const cssl::SynthConfig cfg = cssl::preset("s1");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cssl::Rng rng(seed++);
    benchmark::DoNotOptimize(cssl::generate(cfg, 210, rng));
  }
}
BENCHMARK(BM_Generate);

void BM_WeightedRidge(benchmark::State& state) {
  cssl::Rng rng(3);
  Eigen::MatrixXd X(210, 3), Y(210, 2);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
    for (Eigen::Index j = 0; j < Y.cols(); ++j) Y(i, j) = rng.normal();
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(210);
  for (auto _ : state)
    benchmark::DoNotOptimize(cssl::weighted_ridge(X, Y, w, 1.0));
}
BENCHMARK(BM_WeightedRidge);

void BM_WeightedLogistic(benchmark::State& state) {
  const Instance in = make_instance();
  Eigen::MatrixXd X(in.XC_l.rows() + in.XC_u.rows(), in.XC_l.cols());
  X << in.XC_l, in.XC_u;
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = i % 2 == 0 ? 0.25 : 0.75;
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(X.rows());
  for (auto _ : state)
    benchmark::DoNotOptimize(cssl::weighted_logistic(X, y, w, 1.0));
}
BENCHMARK(BM_WeightedLogistic);

void BM_PosteriorBatch(benchmark::State& state) {
  const Instance in = make_instance();
  const cssl::SemiGenParams p =
      cssl::fit_supervised(in.XC_l, in.y_l, in.XE_l);
  for (auto _ : state)
    benchmark::DoNotOptimize(cssl::posterior(p, in.XC_u, in.XE_u));
}
BENCHMARK(BM_PosteriorBatch);

void BM_FitEmSoft(benchmark::State& state) {
  const Instance in = make_instance();
  for (auto _ : state)
    benchmark::DoNotOptimize(cssl::fit_em(in.XC_l, in.y_l, in.XE_l, in.XC_u,
                                          in.XE_u, cssl::EmMode::kSoft));
}
BENCHMARK(BM_FitEmSoft);

void BM_CondSelf(benchmark::State& state) {
  const Instance in = make_instance();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        cssl::fit_condself(in.XC_l, in.y_l, in.XE_l, in.XC_u, in.XE_u));
}
BENCHMARK(BM_CondSelf);

void BM_LabelProp(benchmark::State& state) {
  const Instance in = make_instance();
  Eigen::MatrixXd Z_l(in.XC_l.rows(), in.XC_l.cols() + in.XE_l.cols());
  Z_l << in.XC_l, in.XE_l;
  Eigen::MatrixXd Z_u(in.XC_u.rows(), in.XC_u.cols() + in.XE_u.cols());
  Z_u << in.XC_u, in.XE_u;
  cssl::LabelPropConfig cfg;
  cfg.max_iter = 50;  // fixed sweep count for a stable per-iteration figure
  for (auto _ : state)
    benchmark::DoNotOptimize(
        cssl::fit_label_propagation(Z_l, in.y_l, Z_u, cfg));
}
BENCHMARK(BM_LabelProp);

}  // namespace

BENCHMARK_MAIN();
