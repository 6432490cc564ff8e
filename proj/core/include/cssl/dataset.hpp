#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cssl/rng.hpp"

namespace cssl {

inline constexpr int kUnlabelled = -1;

// Row-aligned cause/effect matrices with optional {0,1} labels (-1 marks an
// unlabelled row). Immutable by convention once built; safe to share across
// threads read-only.
struct Dataset {
  Eigen::MatrixXd causes;   // n x d_C
  Eigen::MatrixXd effects;  // n x d_E
  Eigen::VectorXi labels;   // length n; entries in {0, 1, kUnlabelled}
  std::vector<std::string> cause_names;
  std::vector<std::string> effect_names;

  Eigen::Index n() const { return causes.rows(); }
  Eigen::Index d_causes() const { return causes.cols(); }
  Eigen::Index d_effects() const { return effects.cols(); }
};

// User-supplied causal partitioning of CSV columns.
struct PartitionConfig {
  std::vector<std::string> cause_columns;
  std::vector<std::string> effect_columns;
  std::string target_column;
  std::string positive_label;

  // Throws ConfigError on overlap or empty effect list.
  void validate() const;
  static PartitionConfig from_json_file(const std::string& path);
};

struct Split {
  std::vector<Eigen::Index> labelled_idx;
  std::vector<Eigen::Index> unlabelled_idx;
};

Dataset load_csv(const std::string& path, const PartitionConfig& config,
                 bool standardize = false);

// Writes header cause_names, effect_names, target ("y" fallback) and values
// with enough digits that reloading reproduces every double bit-exactly.
void save_csv(const Dataset& ds, const std::string& path);

// Uniform draw of n_l + n_u distinct rows; the labelled part must contain both
// classes (up to 1000 redraws). Requires a fully labelled dataset.
Split sample_split(const Dataset& ds, Eigen::Index n_l, Eigen::Index n_u,
                   Rng& rng);

Dataset swap_roles(const Dataset& ds);

// Z-scores each feature column in place with population std; columns with
// std below 1e-12 become all zeros.
void standardize_in_place(Dataset& ds);

// Row selections used throughout the fitting code.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m,
                          const std::vector<Eigen::Index>& idx);
Eigen::VectorXd take_rows(const Eigen::VectorXd& v,
                          const std::vector<Eigen::Index>& idx);
Eigen::VectorXi take_rows(const Eigen::VectorXi& v,
                          const std::vector<Eigen::Index>& idx);

}  // namespace cssl
