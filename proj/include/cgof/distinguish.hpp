#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cgof/data.hpp"

namespace cgof {

/// A fitted distinguisher: scores how synthetic a labeled point looks,
/// g(x, y) in [0, 1]. Immutable and safe to share across threads.
class Distinguisher {
 public:
  virtual ~Distinguisher() = default;
  virtual double score(std::span<const double> x, int y) const = 0;
};

/// Symmetric fitting procedure producing a distinguisher from a subset of
/// an augmented dataset. Permuting the subset must not change the scores.
class DistinguisherProcedure {
 public:
  virtual ~DistinguisherProcedure() = default;
  virtual std::shared_ptr<const Distinguisher> fit(const AugmentedDataset& aug,
                                                   std::span<const int> indices,
                                                   std::uint64_t seed) const = 0;
};

struct ExpandedRow {
  int record;  // index into the augmented dataset
  int y;       // the row's label value (y for c=0, y' for c=1)
  int cls;     // 0 = real sample, 1 = synthetic sample
};

/// The two-sample view of an augmented subset: 2m rows, all c=0 rows first,
/// then all c=1 rows, each block in input order.
struct ExpandedSample {
  const AugmentedDataset* aug = nullptr;
  std::vector<ExpandedRow> rows;

  int pair_count() const { return static_cast<int>(rows.size()) / 2; }
  std::span<const double> x(int row) const {
    return aug->x(rows[static_cast<std::size_t>(row)].record);
  }
};

ExpandedSample expand(const AugmentedDataset& aug, std::span<const int> indices);

// ---------------------------------------------------------------------------
// IRLS logistic solver

struct LogisticModel {
  Eigen::VectorXd theta;  // length d+1, intercept last
  bool converged = false;
  int iterations = 0;

  double score(std::span<const double> x) const;
};

struct IrlsOptions {
  double tol = 1e-8;
  int max_iter = 100;
  double clip_norm = 30.0;  // perfect-separation guard
};

/// Newton/IRLS on the binary cross-entropy objective with intercept.
/// Hessian gets a 1e-10 ridge jitter; steps that increase the objective are
/// halved a few times before reporting NumericalFailure. On separation the
/// coefficient vector is clipped at clip_norm and converged=false.
LogisticModel fit_logistic(const RowMatrix& xs, std::span<const int> cs,
                           const IrlsOptions& opts = {});

// ---------------------------------------------------------------------------
// Basis expansion and the coupled-sample LASSO

/// Bounded basis e_1..e_K : (x, y) -> [-B, B].
class BasisExpansion {
 public:
  virtual ~BasisExpansion() = default;
  virtual int size() const = 0;
  virtual double bound() const = 0;
  virtual void eval(std::span<const double> x, int y, std::span<double> out) const = 0;
};

/// Default basis: per-label intercept plus per-label features clamped to
/// [-B, B]. K = M * (d + 1), laid out label-block by label-block.
class LabelFeatureBasis : public BasisExpansion {
 public:
  LabelFeatureBasis(int label_count, int dim, double bound = 10.0);
  int size() const override { return label_count_ * (dim_ + 1); }
  double bound() const override { return bound_; }
  void eval(std::span<const double> x, int y, std::span<double> out) const override;

 private:
  int label_count_;
  int dim_;
  double bound_;
};

struct DesignMatrix {
  Eigen::MatrixXd xi;  // 2m x K
  Eigen::VectorXd z;   // 0 block then 1 block
};

/// Materializes the regression view of an expanded sample: row r holds the
/// basis evaluated at row r's (x, y); z is the class indicator.
DesignMatrix build_design_matrix(const ExpandedSample& sample, const BasisExpansion& basis);

struct LassoModel {
  Eigen::VectorXd beta;
  double lambda = 0.0;
  std::shared_ptr<const BasisExpansion> basis;  // set when fitted via a procedure
  std::vector<double> objective_trace;          // per sweep, non-increasing
  bool converged = false;
  int sweeps = 0;
};

struct LassoOptions {
  double tol = 1e-9;
  int max_sweeps = 1000;
};

/// Cyclic coordinate descent with exact soft-threshold updates on
///   (1/(4n)) ||z - xi beta||^2 + lambda ||beta||_1,   n = rows/2.
/// Converges when no coordinate moves more than tol in a full sweep. If
/// max_sweeps is exhausted the best iterate is returned with converged=false.
LassoModel fit_lasso(const Eigen::MatrixXd& design, const Eigen::VectorXd& z,
                     double lambda, const LassoOptions& opts = {});

/// lambda = c * sqrt(log(K_n) / n), the consistency-theorem scaling.
double default_lambda(int basis_size, int n, double c = 1.0);

// ---------------------------------------------------------------------------
// Built-in distinguisher procedures

/// Per-label binary classifier used inside the label-split construction.
class BinaryScorer {
 public:
  virtual ~BinaryScorer() = default;
  virtual double score(std::span<const double> x) const = 0;
};

class BinaryClassifierProcedure {
 public:
  virtual ~BinaryClassifierProcedure() = default;
  virtual std::shared_ptr<const BinaryScorer> fit(const RowMatrix& xs,
                                                  std::span<const int> cs,
                                                  std::uint64_t seed) const = 0;
};

class IrlsLogisticInner : public BinaryClassifierProcedure {
 public:
  explicit IrlsLogisticInner(IrlsOptions opts = {}) : opts_(opts) {}
  std::shared_ptr<const BinaryScorer> fit(const RowMatrix& xs, std::span<const int> cs,
                                          std::uint64_t seed) const override;

 private:
  IrlsOptions opts_;
};

/// Label-split rule g(x, y) = g_y(x): expand the subset, fit the inner
/// binary classifier per label stratum, fall back to the constant 0.5 for
/// strata with a single class value.
std::shared_ptr<const Distinguisher> label_split_fit(
    const AugmentedDataset& aug, std::span<const int> indices,
    const BinaryClassifierProcedure& inner, std::uint64_t seed);

class LogisticSplitProcedure : public DistinguisherProcedure {
 public:
  explicit LogisticSplitProcedure(IrlsOptions opts = {}) : inner_(opts) {}
  std::shared_ptr<const Distinguisher> fit(const AugmentedDataset& aug,
                                           std::span<const int> indices,
                                           std::uint64_t seed) const override;

 private:
  IrlsLogisticInner inner_;
};

struct LassoConfig {
  double basis_bound = 10.0;
  // Penalty scale c in default_lambda. The response is a centered class
  // indicator, so the residual scale is at most 1/2; c = 1 over-shrinks and
  // thresholds genuine signal coordinates away at moderate n.
  double lambda_scale = 0.5;
  std::optional<double> lambda_override;  // absolute lambda when set
  LassoOptions solver;
};

/// Squared-loss LASSO over the default bounded basis; scores are the fitted
/// regression values clipped to [0, 1].
class LassoDistinguisherProcedure : public DistinguisherProcedure {
 public:
  explicit LassoDistinguisherProcedure(LassoConfig config = LassoConfig())
      : config_(config) {}
  std::shared_ptr<const Distinguisher> fit(const AugmentedDataset& aug,
                                           std::span<const int> indices,
                                           std::uint64_t seed) const override;

 private:
  LassoConfig config_;
};

/// Scores every point the same; useful as a degenerate baseline.
class ConstantProcedure : public DistinguisherProcedure {
 public:
  explicit ConstantProcedure(double value = 0.5) : value_(value) {}
  std::shared_ptr<const Distinguisher> fit(const AugmentedDataset&, std::span<const int>,
                                           std::uint64_t) const override;

 private:
  double value_;
};

}  // namespace cgof
