#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cssl/bench.hpp"
#include "cssl/dataset.hpp"
#include "cssl/errors.hpp"
#include "cssl/rng.hpp"
#include "cssl/synth.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

nlohmann::json config_json(const cssl::SynthConfig& cfg) {
  nlohmann::json j;
  for (const auto& c : cfg.mixture) {
    nlohmann::json jc;
    jc["weight"] = c.weight;
    jc["mean"] = std::vector<double>(c.mean.begin(), c.mean.end());
    jc["variances"] =
        std::vector<double>(c.variances.begin(), c.variances.end());
    j["mixture"].push_back(jc);
  }
  j["a"] = std::vector<double>(cfg.a.begin(), cfg.a.end());
  j["b"] = cfg.b;
  auto mat = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    return rows;
  };
  j["A0"] = mat(cfg.A0);
  j["A1"] = mat(cfg.A1);
  j["b0"] = std::vector<double>(cfg.b0.begin(), cfg.b0.end());
  j["b1"] = std::vector<double>(cfg.b1.begin(), cfg.b1.end());
  j["D0"] = std::vector<double>(cfg.D0.begin(), cfg.D0.end());
  j["D1"] = std::vector<double>(cfg.D1.begin(), cfg.D1.end());
  return j;
}

int run_generate(const std::string& preset_name, long n, std::uint64_t seed,
                 const std::string& out_path) {
  const cssl::SynthConfig cfg = cssl::preset(preset_name);
  cssl::Rng rng(seed);
  const cssl::Dataset ds = cssl::generate(cfg, n, rng);
  cssl::save_csv(ds, out_path);

  nlohmann::json sidecar;
  sidecar["preset"] = preset_name;
  sidecar["seed"] = seed;
  sidecar["n"] = n;
  sidecar["config"] = config_json(cfg);
  std::ofstream js(out_path + ".json");
  if (!js) throw cssl::DataError("cannot write sidecar: " + out_path + ".json");
  js << sidecar.dump(2) << '\n';
  return 0;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw cssl::DataError("cannot write report: " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised classification with causal feature partitions"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  std::string gen_preset;
  long gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--preset", gen_preset, "s1|s2|s3")->required();
  gen->add_option("--n", gen_n, "number of rows")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  auto* bench = app.add_subcommand("bench", "Run the benchmark protocol");
  std::string ds_name = "s1", csv_path, config_path, methods_arg, format_arg =
      "csv", out_path, tsvm_path;
  long n_l = 10, n_u = 200;
  int runs = 100;
  std::uint64_t seed = 0;
  bool swap = false, standardize = false;
  bench->add_option("--dataset", ds_name, "s1|s2|s3|csv")->required();
  bench->add_option("--csv", csv_path, "CSV path (dataset=csv)");
  bench->add_option("--config", config_path, "partition JSON (dataset=csv)");
  bench->add_option("--methods", methods_arg,
                    "comma-separated method list (default: all)");
  bench->add_option("--n-labelled", n_l, "labelled sample size");
  bench->add_option("--n-unlabelled", n_u, "unlabelled sample size");
  bench->add_option("--runs", runs, "number of repeated runs");
  bench->add_option("--seed", seed, "master seed");
  bench->add_flag("--swap-roles", swap,
                  "paired ablation with causes and effects exchanged");
  bench->add_flag("--standardize", standardize, "z-score feature columns");
  bench->add_option("--format", format_arg, "csv|markdown");
  bench->add_option("--out", out_path, "report path (default: stdout)");
  bench->add_option("--tsvm-reference", tsvm_path,
                    "reference CSV rendered alongside (markdown only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitConfig;
  }

  try {
    if (gen->parsed()) return run_generate(gen_preset, gen_n, gen_seed, gen_out);

    cssl::Protocol p;
    p.dataset = ds_name;
    if (ds_name == "csv") {
      if (csv_path.empty() || config_path.empty())
        throw cssl::ConfigError("--dataset csv requires --csv and --config");
      p.csv_path = csv_path;
      p.partition = cssl::PartitionConfig::from_json_file(config_path);
    } else if (ds_name != "s1" && ds_name != "s2" && ds_name != "s3") {
      throw cssl::UnknownPreset(ds_name);
    }
    p.n_labelled = n_l;
    p.n_unlabelled = n_u;
    p.runs = runs;
    p.master_seed = seed;
    p.standardize = standardize;
    if (methods_arg.empty()) {
      p.methods = {cssl::Method::kSupervised, cssl::Method::kSemigenSup,
                   cssl::Method::kEmSoft,     cssl::Method::kEmHard,
                   cssl::Method::kCondSelf,   cssl::Method::kLabelProp};
    } else {
      std::stringstream ss(methods_arg);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) p.methods.push_back(cssl::parse_method(item));
    }

    cssl::ReportFormat format;
    if (format_arg == "csv")
      format = cssl::ReportFormat::kCsv;
    else if (format_arg == "markdown")
      format = cssl::ReportFormat::kMarkdown;
    else
      throw cssl::ConfigError("unknown format: " + format_arg);

    std::vector<cssl::ReferenceRow> reference;
    if (!tsvm_path.empty()) reference = cssl::load_reference_csv(tsvm_path);

    cssl::BenchReport report;
    if (swap) {
      const cssl::PairedReport paired = cssl::ablate_swap_roles(p);
      report = paired.normal;
      for (const auto& row : paired.swapped.rows) report.rows.push_back(row);
    } else {
      report = cssl::run_protocol(p);
    }
    emit(cssl::render_report(report, format, reference), out_path);
    return 0;
  } catch (const cssl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cssl::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
