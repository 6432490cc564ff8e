#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cssl/dataset.hpp"

namespace cssl {

enum class Method {
  kSupervised,   // logistic regression on joint features
  kSemigenSup,   // supervised semi-generative fit
  kEmSoft,
  kEmHard,
  kCondSelf,
  kLabelProp,
};

// CLI spellings: supervised, semigen-sup, em-soft, em-hard, cond-self,
// labelprop. parse_method throws ConfigError on anything else.
Method parse_method(const std::string& name);
std::string method_name(Method m);

struct Protocol {
  std::string dataset;            // "s1" | "s2" | "s3" | "csv"
  std::string csv_path;           // used when dataset == "csv"
  PartitionConfig partition;      // ditto
  Eigen::Index n_labelled = 10;
  Eigen::Index n_unlabelled = 200;
  int runs = 100;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods;
  bool swap_roles = false;
  bool standardize = false;
};

struct MethodAggregate {
  Method method = Method::kSupervised;
  std::string dataset;
  double mean_acc = 0.0;
  double std_acc = 0.0;  // population std over completed runs
  int runs_completed = 0;
  int failures = 0;
  int nonconvergence = 0;
  std::vector<double> per_run_acc;  // kept for auditing and oracle checks
};

struct BenchReport {
  std::vector<MethodAggregate> rows;
};

struct PairedReport {
  BenchReport normal;
  BenchReport swapped;
  // FNV-1a hashes of each run's split; equal vectors certify shared splits.
  std::vector<std::uint64_t> split_hashes_normal;
  std::vector<std::uint64_t> split_hashes_swapped;
};

enum class ReportFormat { kCsv, kMarkdown };

// Rows of the static reference table rendered alongside recomputed results
// (markdown only), clearly marked as not recomputed.
struct ReferenceRow {
  std::string method;
  std::string dataset;
  double mean_acc = 0.0;
  double std_acc = 0.0;
};

// One fresh dataset + split per run for presets (CSV sources load once and
// resample splits). Per-run seeds derive from (master_seed, run index); runs
// execute in parallel up to CAUSAL_SSL_THREADS with a deterministic
// slot-indexed reduction, so the report is a pure function of the Protocol.
BenchReport run_protocol(const Protocol& p);

// Runs each method twice per run on identical splits, normally and with the
// cause/effect roles exchanged.
PairedReport ablate_swap_roles(const Protocol& p);

// CSV schema: method,dataset,mean_acc,std_acc,runs,failures with full-precision
// values (parse_report_csv round-trips bit-exactly). Markdown mirrors the
// 3-decimal ".968 +/- .023" table style and renders "-" for a method whose
// non-convergence count equals its completed runs.
std::string render_report(const BenchReport& r, ReportFormat format,
                          const std::vector<ReferenceRow>& reference = {});

BenchReport parse_report_csv(const std::string& text);

std::vector<ReferenceRow> load_reference_csv(const std::string& path);

std::uint64_t split_hash(const Split& s);

// Worker cap: CAUSAL_SSL_THREADS when set and positive, else hardware
// concurrency.
int thread_budget();

}  // namespace cssl
