#include "cssl/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cssl/errors.hpp"

namespace cssl {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, long row, const std::string& col) {
  const std::string s = trim(raw);
  if (s.empty()) throw NonNumericCell(row, col);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw NonNumericCell(row, col);
  return v;
}

}  // namespace

void PartitionConfig::validate() const {
  if (effect_columns.empty())
    throw ConfigError("partition config: effect_columns must be non-empty");
  std::set<std::string> seen;
  auto check = [&seen](const std::string& name) {
    if (!seen.insert(name).second)
      throw ConfigError("partition config: column listed twice: " + name);
  };
  for (const auto& c : cause_columns) check(c);
  for (const auto& c : effect_columns) check(c);
  check(target_column);
}

PartitionConfig PartitionConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open partition config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("partition config " + path + ": " + e.what());
  }
  PartitionConfig cfg;
  try {
    cfg.cause_columns = j.at("cause_columns").get<std::vector<std::string>>();
    cfg.effect_columns = j.at("effect_columns").get<std::vector<std::string>>();
    cfg.target_column = j.at("target_column").get<std::string>();
    cfg.positive_label = j.at("positive_label").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("partition config " + path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

Dataset load_csv(const std::string& path, const PartitionConfig& config,
                 bool standardize) {
  config.validate();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("empty file: " + path);
  auto header = split_line(line);
  for (auto& h : header) h = trim(h);

  auto find_col = [&header](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn(name);
    return static_cast<std::size_t>(it - header.begin());
  };

  std::vector<std::size_t> cause_idx, effect_idx;
  for (const auto& c : config.cause_columns) cause_idx.push_back(find_col(c));
  for (const auto& c : config.effect_columns) effect_idx.push_back(find_col(c));
  const std::size_t target_idx = find_col(config.target_column);

  std::vector<std::vector<double>> cause_rows, effect_rows;
  std::vector<std::string> targets;
  long row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() < header.size())
      throw DataError(path + ": data row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    std::vector<double> cr, er;
    for (std::size_t k = 0; k < cause_idx.size(); ++k)
      cr.push_back(parse_cell(cells[cause_idx[k]], row, config.cause_columns[k]));
    for (std::size_t k = 0; k < effect_idx.size(); ++k)
      er.push_back(
          parse_cell(cells[effect_idx[k]], row, config.effect_columns[k]));
    cause_rows.push_back(std::move(cr));
    effect_rows.push_back(std::move(er));
    targets.push_back(trim(cells[target_idx]));
    ++row;
  }
  if (targets.empty()) throw EmptyFile("no data rows in: " + path);

  // At most two distinct target values; with two, positive_label must be one
  // of them or the 0/1 mapping would be ambiguous. A single-valued target is
  // accepted (degenerate but well-defined, e.g. a one-row file).
  std::set<std::string> distinct(targets.begin(), targets.end());
  if (distinct.size() > 2)
    throw TargetNotBinary("target column " + config.target_column + " has " +
                          std::to_string(distinct.size()) +
                          " distinct values, expected 2");
  if (distinct.size() == 2 && distinct.count(config.positive_label) == 0)
    throw TargetNotBinary("positive_label '" + config.positive_label +
                          "' does not occur in target column " +
                          config.target_column);

  const auto n = static_cast<Eigen::Index>(targets.size());
  Dataset ds;
  ds.causes.resize(n, static_cast<Eigen::Index>(cause_idx.size()));
  ds.effects.resize(n, static_cast<Eigen::Index>(effect_idx.size()));
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < ds.causes.cols(); ++j)
      ds.causes(i, j) = cause_rows[i][j];
    for (Eigen::Index j = 0; j < ds.effects.cols(); ++j)
      ds.effects(i, j) = effect_rows[i][j];
    ds.labels[i] = targets[i] == config.positive_label ? 1 : 0;
  }
  ds.cause_names = config.cause_columns;
  ds.effect_names = config.effect_columns;

  if (!ds.causes.allFinite() || !ds.effects.allFinite())
    throw DataError(path + ": non-finite value in data");
  if (standardize) standardize_in_place(ds);
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write CSV: " + path);
  auto col_name = [](const std::vector<std::string>& names, const char* prefix,
                     Eigen::Index j) {
    return j < static_cast<Eigen::Index>(names.size())
               ? names[j]
               : std::string(prefix) + std::to_string(j);
  };
  for (Eigen::Index j = 0; j < ds.d_causes(); ++j)
    out << col_name(ds.cause_names, "xc_", j) << ',';
  for (Eigen::Index j = 0; j < ds.d_effects(); ++j)
    out << col_name(ds.effect_names, "xe_", j) << ',';
  out << "y\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << ',';
  };
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d_causes(); ++j) put(ds.causes(i, j));
    for (Eigen::Index j = 0; j < ds.d_effects(); ++j) put(ds.effects(i, j));
    out << ds.labels[i] << '\n';
  }
}

Split sample_split(const Dataset& ds, Eigen::Index n_l, Eigen::Index n_u,
                   Rng& rng) {
  const Eigen::Index n = ds.n();
  if (n_l < 2) throw TooFewRows("need at least 2 labelled rows");
  if (n_l + n_u > n)
    throw TooFewRows("requested " + std::to_string(n_l + n_u) + " rows from " +
                     std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i)
    if (ds.labels[i] != 0 && ds.labels[i] != 1)
      throw DataError("sample_split requires a fully labelled dataset");

  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    // Partial Fisher-Yates: the first n_l + n_u slots become the draw.
    for (Eigen::Index i = 0; i < n_l + n_u; ++i) {
      auto j = i + static_cast<Eigen::Index>(
                       rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
    }
    bool has0 = false, has1 = false;
    for (Eigen::Index i = 0; i < n_l; ++i)
      (ds.labels[pool[static_cast<std::size_t>(i)]] == 1 ? has1 : has0) = true;
    if (has0 && has1) {
      Split s;
      s.labelled_idx.assign(pool.begin(), pool.begin() + n_l);
      s.unlabelled_idx.assign(pool.begin() + n_l, pool.begin() + n_l + n_u);
      return s;
    }
  }
  throw SingleClassAfterRetries(
      "labelled sample contained a single class in 1000 attempts");
}

Dataset swap_roles(const Dataset& ds) {
  Dataset out;
  out.causes = ds.effects;
  out.effects = ds.causes;
  out.labels = ds.labels;
  out.cause_names = ds.effect_names;
  out.effect_names = ds.cause_names;
  return out;
}

namespace {

void standardize_matrix(Eigen::MatrixXd& m) {
  const auto n = static_cast<double>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    const double var = (m.col(j).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd < 1e-12)
      m.col(j).setZero();
    else
      m.col(j) = (m.col(j).array() - mean) / sd;
  }
}

}  // namespace

void standardize_in_place(Dataset& ds) {
  standardize_matrix(ds.causes);
  standardize_matrix(ds.effects);
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m,
                          const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v,
                          const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

Eigen::VectorXi take_rows(const Eigen::VectorXi& v,
                          const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXi out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

}  // namespace cssl
