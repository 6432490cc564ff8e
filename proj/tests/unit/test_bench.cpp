#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cssl/bench.hpp"
#include "cssl/condself.hpp"
#include "cssl/dataset.hpp"
#include "cssl/errors.hpp"
#include "cssl/synth.hpp"
#include "doctest.h"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct TempFile {
  std::string path;
  explicit TempFile(std::string name) : path(std::move(name)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

bool same_aggregate(const cssl::MethodAggregate& a,
                    const cssl::MethodAggregate& b) {
  return a.method == b.method && a.dataset == b.dataset &&
         a.mean_acc == b.mean_acc && a.std_acc == b.std_acc &&
         a.runs_completed == b.runs_completed && a.failures == b.failures &&
         a.nonconvergence == b.nonconvergence &&
         a.per_run_acc == b.per_run_acc;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("method names round-trip through the parser") {
  const cssl::Method all[] = {
      cssl::Method::kSupervised, cssl::Method::kSemigenSup,
      cssl::Method::kEmSoft,     cssl::Method::kEmHard,
      cssl::Method::kCondSelf,   cssl::Method::kLabelProp,
  };
  for (cssl::Method m : all)
    CHECK(cssl::parse_method(cssl::method_name(m)) == m);
  CHECK_THROWS_AS(cssl::parse_method("gradient-boosting"), cssl::ConfigError);
}

TEST_CASE("a trivially separable CSV source scores accuracy 1.0") {
  cssl::Dataset ds;
  ds.causes.resize(30, 1);
  ds.effects.resize(30, 1);
  ds.labels.resize(30);
  for (int i = 0; i < 30; ++i) {
    const int y = i < 15 ? 0 : 1;
    ds.causes(i, 0) = y == 0 ? -5.0 : 5.0;
    ds.effects(i, 0) = static_cast<double>(y);
    ds.labels[i] = y;
  }
  ds.cause_names = {"x"};
  ds.effect_names = {"e"};
  TempFile tmp("bench_separable.csv");
  cssl::save_csv(ds, tmp.path);

  cssl::Protocol p;
  p.dataset = "csv";
  p.csv_path = tmp.path;
  p.partition.cause_columns = {"x"};
  p.partition.effect_columns = {"e"};
  p.partition.target_column = "y";
  p.partition.positive_label = "1";
  p.n_labelled = 4;
  p.n_unlabelled = 20;
  p.runs = 1;
  p.master_seed = 5;
  p.methods = {cssl::Method::kSupervised};
  const cssl::BenchReport rep = cssl::run_protocol(p);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].dataset == "csv");
  CHECK(rep.rows[0].runs_completed == 1);
  CHECK(rep.rows[0].failures == 0);
  CHECK(rep.rows[0].mean_acc == 1.0);
  CHECK(rep.rows[0].std_acc == 0.0);
}

TEST_CASE("run_protocol is a pure function of the protocol") {
  cssl::Protocol p;
  p.dataset = "s1";
  p.n_labelled = 10;
  p.n_unlabelled = 40;
  p.runs = 3;
  p.master_seed = 17;
  p.methods = {cssl::Method::kSupervised, cssl::Method::kSemigenSup,
               cssl::Method::kEmSoft,     cssl::Method::kEmHard,
               cssl::Method::kCondSelf,   cssl::Method::kLabelProp};
  const cssl::BenchReport a = cssl::run_protocol(p);
  const cssl::BenchReport b = cssl::run_protocol(p);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k)
    CHECK(same_aggregate(a.rows[k], b.rows[k]));
  CHECK(cssl::render_report(a, cssl::ReportFormat::kCsv) ==
        cssl::render_report(b, cssl::ReportFormat::kCsv));

  SUBCASE("aggregates match a two-pass oracle over the per-run accuracies") {
    for (const auto& row : a.rows) {
      REQUIRE(row.runs_completed ==
              static_cast<int>(row.per_run_acc.size()));
      REQUIRE(row.runs_completed > 0);
      double mean = 0.0;
      for (double v : row.per_run_acc) mean += v;
      mean /= row.runs_completed;
      double ss = 0.0;
      for (double v : row.per_run_acc) ss += (v - mean) * (v - mean);
      CHECK(std::abs(row.mean_acc - mean) < 1e-12);
      CHECK(std::abs(row.std_acc - std::sqrt(ss / row.runs_completed)) <
            1e-12);
    }
  }

  SUBCASE("the CSV rendering parses back bit-exactly") {
    const cssl::BenchReport back =
        cssl::parse_report_csv(cssl::render_report(a, cssl::ReportFormat::kCsv));
    REQUIRE(back.rows.size() == a.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
      CHECK(back.rows[k].method == a.rows[k].method);
      CHECK(back.rows[k].dataset == a.rows[k].dataset);
      CHECK(back.rows[k].mean_acc == a.rows[k].mean_acc);
      CHECK(back.rows[k].std_acc == a.rows[k].std_acc);
      CHECK(back.rows[k].runs_completed == a.rows[k].runs_completed);
      CHECK(back.rows[k].failures == a.rows[k].failures);
    }
  }
}

TEST_CASE("each method's result is independent of the rest of the list") {
  cssl::Protocol p;
  p.dataset = "s2";
  p.n_labelled = 8;
  p.n_unlabelled = 30;
  p.runs = 2;
  p.master_seed = 21;
  p.methods = {cssl::Method::kSupervised, cssl::Method::kEmSoft};
  const cssl::BenchReport both = cssl::run_protocol(p);
  p.methods = {cssl::Method::kEmSoft};
  const cssl::BenchReport alone = cssl::run_protocol(p);
  REQUIRE(both.rows.size() == 2);
  REQUIRE(alone.rows.size() == 1);
  CHECK(same_aggregate(both.rows[1], alone.rows[0]));
}

TEST_CASE("swap ablation shares each run's split across both role layouts") {
  cssl::Protocol p;
  p.dataset = "s2";
  p.n_labelled = 8;
  p.n_unlabelled = 30;
  p.runs = 3;
  p.master_seed = 9;
  p.methods = {cssl::Method::kCondSelf};
  const cssl::PairedReport pr = cssl::ablate_swap_roles(p);
  REQUIRE(pr.split_hashes_normal.size() == 3);
  REQUIRE(pr.split_hashes_swapped.size() == 3);
  for (std::size_t r = 0; r < 3; ++r)
    CHECK(pr.split_hashes_normal[r] == pr.split_hashes_swapped[r]);
  REQUIRE(pr.normal.rows.size() == 1);
  REQUIRE(pr.swapped.rows.size() == 1);
  CHECK(pr.normal.rows[0].dataset == "s2");
  CHECK(pr.swapped.rows[0].dataset == "s2-swapped");
  CHECK(pr.normal.rows[0].runs_completed == 3);
  CHECK(pr.swapped.rows[0].runs_completed == 3);
}

TEST_CASE("exchangeable roles leave cond-self accuracy unchanged on average") {
  // Single standard-normal cause, flat label prior, slopes +/-0.7 and noise
  // variance 0.51 give Var(X_E) = 1 and corr(X_C, X_E | Y) = +/-0.7, so the
  // joint law of (X_C, X_E, Y) is invariant under exchanging the features.
  cssl::MixtureComponent comp;
  comp.weight = 1.0;
  comp.mean = VectorXd::Zero(1);
  comp.variances = VectorXd::Ones(1);
  cssl::SynthConfig cfg;
  cfg.mixture = {comp};
  cfg.a = VectorXd::Zero(1);
  cfg.b = 0.0;
  cfg.A0 = MatrixXd::Constant(1, 1, 0.7);
  cfg.A1 = MatrixXd::Constant(1, 1, -0.7);
  cfg.b0 = VectorXd::Zero(1);
  cfg.b1 = VectorXd::Zero(1);
  cfg.D0 = VectorXd::Constant(1, std::sqrt(0.51));
  cfg.D1 = cfg.D0;
  cfg.validate();

  const Eigen::Index n_l = 10, n_u = 60;
  const int runs = 100;
  double sum_diff = 0.0;
  for (int r = 0; r < runs; ++r) {
    cssl::Rng rng = cssl::Rng::derive(99, static_cast<std::uint64_t>(r));
    const cssl::Dataset ds = cssl::generate(cfg, n_l + n_u, rng);
    const cssl::Split split = cssl::sample_split(ds, n_l, n_u, rng);
    auto acc_of = [&](const cssl::Dataset& d) {
      const cssl::CondSelfResult res = cssl::fit_condself(
          cssl::take_rows(d.causes, split.labelled_idx),
          cssl::take_rows(d.labels, split.labelled_idx).cast<double>(),
          cssl::take_rows(d.effects, split.labelled_idx),
          cssl::take_rows(d.causes, split.unlabelled_idx),
          cssl::take_rows(d.effects, split.unlabelled_idx));
      const Eigen::VectorXi truth =
          cssl::take_rows(d.labels, split.unlabelled_idx);
      int hits = 0;
      for (Eigen::Index i = 0; i < truth.size(); ++i)
        if (res.labels[i] == truth[i]) ++hits;
      return static_cast<double>(hits) / static_cast<double>(n_u);
    };
    sum_diff += acc_of(ds) - acc_of(cssl::swap_roles(ds));
  }
  CHECK(std::abs(sum_diff / runs) <= 0.03);
}

TEST_CASE("report rendering") {
  SUBCASE("an empty report renders as a bare header") {
    CHECK(cssl::render_report({}, cssl::ReportFormat::kCsv) ==
          "method,dataset,mean_acc,std_acc,runs,failures\n");
    CHECK(cssl::render_report({}, cssl::ReportFormat::kMarkdown) ==
          "| Method |\n|---|\n");
  }

  cssl::BenchReport rep;
  cssl::MethodAggregate row;
  row.method = cssl::Method::kSupervised;
  row.dataset = "s1";
  row.mean_acc = 0.968;
  row.std_acc = 0.023;
  row.runs_completed = 100;
  rep.rows.push_back(row);

  SUBCASE("markdown drops the leading zero of the 3-decimal cells") {
    const std::string md =
        cssl::render_report(rep, cssl::ReportFormat::kMarkdown);
    CHECK(md.find("| Method | s1 |") != std::string::npos);
    CHECK(md.find("| Lin. log. reg. (sup.) | .968 ± .023 |") !=
          std::string::npos);
    CHECK(md.find("not recomputed") == std::string::npos);
  }

  SUBCASE("a fully non-converged method renders as a dash, a failed one n/a") {
    cssl::MethodAggregate lp;
    lp.method = cssl::Method::kLabelProp;
    lp.dataset = "s1";
    lp.mean_acc = 0.5;
    lp.std_acc = 0.1;
    lp.runs_completed = 5;
    lp.nonconvergence = 5;
    rep.rows.push_back(lp);
    cssl::MethodAggregate dead;
    dead.method = cssl::Method::kCondSelf;
    dead.dataset = "s1";
    dead.runs_completed = 0;
    dead.failures = 5;
    rep.rows.push_back(dead);
    const std::string md =
        cssl::render_report(rep, cssl::ReportFormat::kMarkdown);
    CHECK(md.find("| Label propagation | - |") != std::string::npos);
    CHECK(md.find("| Cond. self-learning | n/a |") != std::string::npos);
  }

  SUBCASE("reference rows are starred and footnoted") {
    const std::vector<cssl::ReferenceRow> refs = {
        {"Lin. T-SVM", "s1", 0.865, 0.093}};
    const std::string md =
        cssl::render_report(rep, cssl::ReportFormat::kMarkdown, refs);
    CHECK(md.find("| Lin. T-SVM | .865 ± .093 * |") != std::string::npos);
    CHECK(md.find("\\* paper-reported reference values, not recomputed") !=
          std::string::npos);
  }
}

TEST_CASE("reference CSV loading") {
  TempFile tmp("bench_reference.csv");
  {
    std::ofstream out(tmp.path);
    out << "method,dataset,mean_acc,std_acc\n"
        << "Lin. T-SVM,s1,0.865,0.093\n"
        << "RBF T-SVM,s1,0.863,0.094\n";
  }
  const std::vector<cssl::ReferenceRow> rows =
      cssl::load_reference_csv(tmp.path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "Lin. T-SVM");
  CHECK(rows[0].dataset == "s1");
  CHECK(rows[0].mean_acc == 0.865);
  CHECK(rows[1].std_acc == 0.094);
  CHECK_THROWS_AS(cssl::load_reference_csv("no_such_reference.csv"),
                  cssl::DataError);
}

TEST_CASE("protocol validation") {
  cssl::Protocol p;
  p.dataset = "s1";
  p.methods = {cssl::Method::kSupervised};
  p.runs = 0;
  CHECK_THROWS_AS(cssl::run_protocol(p), cssl::ConfigError);
  p.runs = 1;
  p.n_labelled = 1;
  CHECK_THROWS_AS(cssl::run_protocol(p), cssl::ConfigError);
  p.n_labelled = 10;
  p.methods.clear();
  CHECK_THROWS_AS(cssl::run_protocol(p), cssl::ConfigError);
}

TEST_CASE("split hashing separates the two index lists") {
  cssl::Split a;
  a.labelled_idx = {1, 2};
  a.unlabelled_idx = {3};
  cssl::Split b = a;
  CHECK(cssl::split_hash(a) == cssl::split_hash(b));
  cssl::Split c;
  c.labelled_idx = {1};
  c.unlabelled_idx = {2, 3};
  CHECK(cssl::split_hash(a) != cssl::split_hash(c));
}

TEST_CASE("thread budget is always at least one worker") {
  CHECK(cssl::thread_budget() >= 1);
}

}  // TEST_SUITE
