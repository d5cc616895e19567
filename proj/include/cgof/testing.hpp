#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgof/data.hpp"
#include "cgof/distinguish.hpp"
#include "cgof/variance.hpp"

namespace cgof {

enum class ProcedureKind { Split, Cross };

struct TestConfig {
  double alpha = 0.05;
  double delta = 0.0;  // tolerance radius, in [0, 0.5]
  ProcedureKind kind = ProcedureKind::Cross;
  int fold_count = 5;           // cross only
  double split_fraction = 0.5;  // fraction used for fitting, split only
  std::uint64_t seed = 0;
};

struct FoldDetail {
  double T = 0.0;
  double sigma2 = 0.0;
  int size = 0;
};

struct TestReport {
  ProcedureKind kind = ProcedureKind::Split;
  double alpha = 0.0;
  double delta = 0.0;
  double T = 0.0;
  double sigma2_hat = 0.0;
  double z_stat = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double delta_min = 0.0;
  int n = 0;
  int n_eval = 0;  // n2 for split, n for cross
  std::uint64_t seed = 0;
  std::vector<FoldDetail> per_fold;  // cross only
};

/// Inverse standard normal CDF; absolute error below 1e-9 (rational
/// approximation refined by one Halley step against the erfc-based CDF).
double normal_quantile(double p);

/// One-sided upper tail 1 - Phi(z).
double normal_tail(double z);

/// delta_min(alpha) = max(0, T - 1/2 - sigma_hat z_{1-alpha} / sqrt(n_eff)):
/// the smallest tolerance at which the level-alpha test does not reject,
/// equally a (1-alpha) lower confidence bound for the separation.
double delta_min(double T, double sigma_hat, int n_eff, double alpha);

TestReport run_split_test(const AugmentedDataset& aug,
                          const DistinguisherProcedure& procedure, const TestConfig& cfg);

TestReport run_cross_test(const AugmentedDataset& aug,
                          const DistinguisherProcedure& procedure, const TestConfig& cfg);

/// Dispatches on cfg.kind.
TestReport run_test(const AugmentedDataset& aug, const DistinguisherProcedure& procedure,
                    const TestConfig& cfg);

}  // namespace cgof
