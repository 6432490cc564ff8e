#include "cssl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "cssl/baselines.hpp"
#include "cssl/condself.hpp"
#include "cssl/errors.hpp"
#include "cssl/semigen.hpp"
#include "cssl/synth.hpp"

namespace cssl {

Method parse_method(const std::string& name) {
  if (name == "supervised") return Method::kSupervised;
  if (name == "semigen-sup") return Method::kSemigenSup;
  if (name == "em-soft") return Method::kEmSoft;
  if (name == "em-hard") return Method::kEmHard;
  if (name == "cond-self") return Method::kCondSelf;
  if (name == "labelprop") return Method::kLabelProp;
  throw ConfigError("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kSupervised: return "supervised";
    case Method::kSemigenSup: return "semigen-sup";
    case Method::kEmSoft: return "em-soft";
    case Method::kEmHard: return "em-hard";
    case Method::kCondSelf: return "cond-self";
    case Method::kLabelProp: return "labelprop";
  }
  return "?";
}

int thread_budget() {
  if (const char* env = std::getenv("CAUSAL_SSL_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t split_hash(const Split& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  for (auto i : s.labelled_idx) mix(static_cast<std::uint64_t>(i));
  mix(0xffffffffffffffffULL);  // separator between the two index lists
  for (auto i : s.unlabelled_idx) mix(static_cast<std::uint64_t>(i));
  return h;
}

namespace {

struct MethodOutcome {
  std::optional<double> accuracy;  // empty on failure
  bool nonconverged = false;
};

struct RunOutcome {
  std::vector<MethodOutcome> normal;
  std::vector<MethodOutcome> swapped;
  std::uint64_t hash_normal = 0;
  std::uint64_t hash_swapped = 0;
};

double accuracy(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth) {
  if (pred.size() != truth.size() || pred.size() == 0)
    throw DimensionMismatch("accuracy: size mismatch");
  double hits = 0.0;
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) hits += 1.0;
  return hits / static_cast<double>(pred.size());
}

MethodOutcome eval_method(Method m, const Dataset& ds, const Split& split) {
  const Eigen::MatrixXd XC_l = take_rows(ds.causes, split.labelled_idx);
  const Eigen::MatrixXd XE_l = take_rows(ds.effects, split.labelled_idx);
  const Eigen::MatrixXd XC_u = take_rows(ds.causes, split.unlabelled_idx);
  const Eigen::MatrixXd XE_u = take_rows(ds.effects, split.unlabelled_idx);
  const Eigen::VectorXi truth = take_rows(ds.labels, split.unlabelled_idx);
  Eigen::VectorXd y_l(static_cast<Eigen::Index>(split.labelled_idx.size()));
  for (Eigen::Index i = 0; i < y_l.size(); ++i)
    y_l[i] = ds.labels[split.labelled_idx[static_cast<std::size_t>(i)]];

  MethodOutcome out;
  Eigen::VectorXi pred;
  switch (m) {
    case Method::kSupervised:
      pred = predict_logreg(fit_supervised_logreg(XC_l, XE_l, y_l), XC_u, XE_u);
      break;
    case Method::kSemigenSup:
      pred = predict(fit_supervised(XC_l, y_l, XE_l), XC_u, XE_u);
      break;
    case Method::kEmSoft: {
      const EmResult r =
          fit_em(XC_l, y_l, XE_l, XC_u, XE_u, EmMode::kSoft);
      pred.resize(r.q.size());
      for (Eigen::Index i = 0; i < r.q.size(); ++i)
        pred[i] = r.q[i] > 0.5 ? 1 : 0;
      break;
    }
    case Method::kEmHard: {
      const EmResult r =
          fit_em(XC_l, y_l, XE_l, XC_u, XE_u, EmMode::kHard);
      pred.resize(r.q.size());
      for (Eigen::Index i = 0; i < r.q.size(); ++i)
        pred[i] = r.q[i] > 0.5 ? 1 : 0;
      break;
    }
    case Method::kCondSelf:
      pred = fit_condself(XC_l, y_l, XE_l, XC_u, XE_u).labels;
      break;
    case Method::kLabelProp: {
      Eigen::MatrixXd Z_l(XC_l.rows(), XC_l.cols() + XE_l.cols());
      Z_l << XC_l, XE_l;
      Eigen::MatrixXd Z_u(XC_u.rows(), XC_u.cols() + XE_u.cols());
      Z_u << XC_u, XE_u;
      const LabelPropResult r = fit_label_propagation(Z_l, y_l, Z_u);
      out.nonconverged = !r.converged;
      pred = r.labels;
      break;
    }
  }
  out.accuracy = accuracy(pred, truth);
  return out;
}

struct Source {
  std::optional<SynthConfig> cfg;  // preset source
  std::optional<Dataset> csv;      // fixed-file source
};

Source make_source(const Protocol& p) {
  Source s;
  if (p.dataset == "csv") {
    s.csv = load_csv(p.csv_path, p.partition, p.standardize);
  } else {
    s.cfg = preset(p.dataset);
  }
  return s;
}

RunOutcome execute_run(const Protocol& p, const Source& src, int r,
                       bool both_roles) {
  RunOutcome out;
  out.normal.resize(p.methods.size());
  if (both_roles) out.swapped.resize(p.methods.size());

  Dataset ds;
  Split split;
  try {
    Rng rng = Rng::derive(p.master_seed, static_cast<std::uint64_t>(r));
    if (src.cfg) {
      ds = generate(*src.cfg, p.n_labelled + p.n_unlabelled, rng);
      if (p.standardize) standardize_in_place(ds);
    } else {
      ds = *src.csv;
    }
    split = sample_split(ds, p.n_labelled, p.n_unlabelled, rng);
  } catch (const Error&) {
    return out;  // run-level failure: every method records a failure
  }

  out.hash_normal = split_hash(split);
  out.hash_swapped = out.hash_normal;  // same split by construction

  const Dataset ds_normal = p.swap_roles ? swap_roles(ds) : ds;
  for (std::size_t k = 0; k < p.methods.size(); ++k) {
    try {
      out.normal[k] = eval_method(p.methods[k], ds_normal, split);
    } catch (const std::exception&) {
      out.normal[k] = MethodOutcome{};
    }
  }
  if (both_roles) {
    const Dataset ds_swapped = swap_roles(ds_normal);
    for (std::size_t k = 0; k < p.methods.size(); ++k) {
      try {
        out.swapped[k] = eval_method(p.methods[k], ds_swapped, split);
      } catch (const std::exception&) {
        out.swapped[k] = MethodOutcome{};
      }
    }
  }
  return out;
}

std::vector<RunOutcome> execute(const Protocol& p, bool both_roles) {
  if (p.runs < 1) throw ConfigError("protocol: runs must be >= 1");
  if (p.n_labelled < 2) throw ConfigError("protocol: n_labelled must be >= 2");
  if (p.methods.empty()) throw ConfigError("protocol: no methods selected");
  const Source src = make_source(p);

  std::vector<RunOutcome> slots(static_cast<std::size_t>(p.runs));
  const int workers = std::min(thread_budget(), p.runs);
  if (workers <= 1) {
    for (int r = 0; r < p.runs; ++r)
      slots[static_cast<std::size_t>(r)] = execute_run(p, src, r, both_roles);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wk = 0; wk < workers; ++wk)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < p.runs; r = next.fetch_add(1))
          slots[static_cast<std::size_t>(r)] =
              execute_run(p, src, r, both_roles);
      });
    for (auto& th : pool) th.join();
  }
  return slots;
}

BenchReport aggregate(const Protocol& p, const std::vector<RunOutcome>& slots,
                      bool swapped_side) {
  BenchReport report;
  const std::string dataset_label =
      p.dataset + (swapped_side != p.swap_roles ? "-swapped" : "");
  for (std::size_t k = 0; k < p.methods.size(); ++k) {
    MethodAggregate agg;
    agg.method = p.methods[k];
    agg.dataset = dataset_label;
    for (const auto& slot : slots) {
      const auto& side = swapped_side ? slot.swapped : slot.normal;
      const MethodOutcome& mo = side[k];
      if (!mo.accuracy) {
        ++agg.failures;
        continue;
      }
      agg.per_run_acc.push_back(*mo.accuracy);
      if (mo.nonconverged) ++agg.nonconvergence;
    }
    agg.runs_completed = static_cast<int>(agg.per_run_acc.size());
    if (agg.runs_completed > 0) {
      double sum = 0.0;
      for (double a : agg.per_run_acc) sum += a;
      agg.mean_acc = sum / agg.runs_completed;
      double ss = 0.0;
      for (double a : agg.per_run_acc)
        ss += (a - agg.mean_acc) * (a - agg.mean_acc);
      agg.std_acc = std::sqrt(ss / agg.runs_completed);  // population std
    }
    report.rows.push_back(std::move(agg));
  }
  return report;
}

}  // namespace

BenchReport run_protocol(const Protocol& p) {
  return aggregate(p, execute(p, false), false);
}

PairedReport ablate_swap_roles(const Protocol& p) {
  const auto slots = execute(p, true);
  PairedReport out;
  out.normal = aggregate(p, slots, false);
  out.swapped = aggregate(p, slots, true);
  for (const auto& slot : slots) {
    out.split_hashes_normal.push_back(slot.hash_normal);
    out.split_hashes_swapped.push_back(slot.hash_swapped);
  }
  return out;
}

namespace {

// Table-style 3-decimal formatting with the leading zero dropped: .968, 1.000.
std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s.size() > 1 && s[0] == '0' && s[1] == '.') s.erase(0, 1);
  return s;
}

std::string display_name(const std::string& m) {
  if (m == "supervised") return "Lin. log. reg. (sup.)";
  if (m == "semigen-sup") return "Semi-gen. (sup.)";
  if (m == "em-soft") return "Semi-gen. + soft EM";
  if (m == "em-hard") return "Semi-gen. + hard EM";
  if (m == "cond-self") return "Cond. self-learning";
  if (m == "labelprop") return "Label propagation";
  return m;
}

}  // namespace

std::string render_report(const BenchReport& r, ReportFormat format,
                          const std::vector<ReferenceRow>& reference) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "method,dataset,mean_acc,std_acc,runs,failures\n";
    char buf[64];
    for (const auto& row : r.rows) {
      out << method_name(row.method) << ',' << row.dataset << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.mean_acc);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.std_acc);
      out << buf << ',' << row.runs_completed << ',' << row.failures << '\n';
    }
    return out.str();
  }

  // Markdown mirrors the accuracy table: methods as rows, datasets as columns.
  std::vector<std::string> datasets;
  for (const auto& row : r.rows)
    if (std::find(datasets.begin(), datasets.end(), row.dataset) ==
        datasets.end())
      datasets.push_back(row.dataset);
  for (const auto& ref : reference)
    if (std::find(datasets.begin(), datasets.end(), ref.dataset) ==
        datasets.end())
      datasets.push_back(ref.dataset);

  struct Line {
    std::string name;
    bool is_reference = false;
  };
  std::vector<Line> lines;
  auto ensure_line = [&lines](const std::string& name, bool is_ref) {
    for (const auto& l : lines)
      if (l.name == name) return;
    lines.push_back({name, is_ref});
  };
  for (const auto& row : r.rows)
    ensure_line(display_name(method_name(row.method)), false);
  for (const auto& ref : reference) ensure_line(ref.method, true);

  auto cell = [&](const Line& line, const std::string& ds) -> std::string {
    if (!line.is_reference) {
      for (const auto& row : r.rows)
        if (display_name(method_name(row.method)) == line.name &&
            row.dataset == ds) {
          if (row.runs_completed == 0) return "n/a";
          if (row.nonconvergence == row.runs_completed) return "-";
          return fmt3(row.mean_acc) + " ± " + fmt3(row.std_acc);
        }
    } else {
      for (const auto& ref : reference)
        if (ref.method == line.name && ref.dataset == ds)
          return fmt3(ref.mean_acc) + " ± " + fmt3(ref.std_acc) + " *";
    }
    return "";
  };

  out << "| Method |";
  for (const auto& ds : datasets) out << ' ' << ds << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < datasets.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& line : lines) {
    out << "| " << line.name << " |";
    for (const auto& ds : datasets) out << ' ' << cell(line, ds) << " |";
    out << '\n';
  }
  bool any_ref = false;
  for (const auto& line : lines) any_ref = any_ref || line.is_reference;
  if (any_ref) out << "\n\\* paper-reported reference values, not recomputed\n";
  return out.str();
}

BenchReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("report CSV: empty text");
  BenchReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string method, dataset, mean, sd, runs, failures;
    std::getline(ss, method, ',');
    std::getline(ss, dataset, ',');
    std::getline(ss, mean, ',');
    std::getline(ss, sd, ',');
    std::getline(ss, runs, ',');
    std::getline(ss, failures, ',');
    MethodAggregate agg;
    agg.method = parse_method(method);
    agg.dataset = dataset;
    agg.mean_acc = std::strtod(mean.c_str(), nullptr);
    agg.std_acc = std::strtod(sd.c_str(), nullptr);
    agg.runs_completed = std::atoi(runs.c_str());
    agg.failures = std::atoi(failures.c_str());
    report.rows.push_back(std::move(agg));
  }
  return report;
}

std::vector<ReferenceRow> load_reference_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reference CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("empty reference CSV: " + path);
  std::vector<ReferenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    ReferenceRow row;
    std::string mean, sd;
    std::getline(ss, row.method, ',');
    std::getline(ss, row.dataset, ',');
    std::getline(ss, mean, ',');
    std::getline(ss, sd, ',');
    row.mean_acc = std::strtod(mean.c_str(), nullptr);
    row.std_acc = std::strtod(sd.c_str(), nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cssl
