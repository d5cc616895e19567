#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cgof/oracle.hpp"
#include "cgof/testing.hpp"

namespace cgof {

enum class Setting { Logistic, Sparse };
enum class DistinguisherKind { Logistic, Lasso, Constant };
enum class SimProcedure { Split, Cross, Both };

struct ExperimentSpec {
  Setting setting = Setting::Logistic;
  int n = 1000;
  int d = 200;
  int reps = 200;
  std::vector<double> alphas = {0.05};
  std::vector<double> delta_ratios = {0.0};  // fractions of the recomputed delta*
  std::uint64_t theta_seed = 42;
  DistinguisherKind distinguisher = DistinguisherKind::Logistic;
  SimProcedure procedure = SimProcedure::Both;
  int fold_count = 5;
  double split_fraction = 0.5;
  std::uint64_t seed = 20250809;
  long oracle_draws = 1000000;  // draws for the delta* oracle
};

struct ResultRow {
  std::string setting;
  std::string procedure;
  std::string distinguisher;
  int n = 0;
  int fold_count = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double delta_ratio = 0.0;
  int reps = 0;
  double rejection_rate = 0.0;
  double mean_T = 0.0;
  double mean_sigma2 = 0.0;
  double mc_se = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  double delta_star = 0.0;
  double delta_star_se = 0.0;
  double runtime_seconds = 0.0;
};

/// theta* for a setting: N(0, 0.25^2 I_d) draw for the logistic setting,
/// (1,1,1,1,1,0,...,0) for the sparse one.
Eigen::VectorXd make_theta_star(Setting setting, int d, std::uint64_t theta_seed);

std::shared_ptr<const DistinguisherProcedure> make_procedure(DistinguisherKind kind);

/// Exact-null rejection rates (theta_hat = theta*) at delta = 0.
ExperimentResult run_type1(const ExperimentSpec& spec);

/// Power against theta_hat = -theta* across the delta_ratios grid.
ExperimentResult run_power(const ExperimentSpec& spec);

/// Sparse-setting power curves comparing the lasso and logistic
/// distinguishers under K-fold cross-fitting.
ExperimentResult run_sparse(const ExperimentSpec& spec);

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows);
void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const ExperimentResult& result);

}  // namespace cgof
