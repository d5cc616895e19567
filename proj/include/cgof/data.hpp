#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "cgof/errors.hpp"

namespace cgof {

/// Row-major so feature rows are contiguous and cheap to view as spans.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Probability vector over M labels. Entries nonnegative, summing to one.
struct SimplexVector {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int k) const { return probs[static_cast<std::size_t>(k)]; }
  std::span<const double> span() const { return probs; }
};

/// Validates a raw probability row and renormalizes rounding error away.
/// Rejects entries below -1e-9 and sums below 1e-12; entries in [-1e-9, 0)
/// are clamped to zero before renormalization.
SimplexVector validate_simplex(std::span<const double> raw, int label_count);

/// Holdout sample: features X (n x d), labels Y in {0..M-1}.
class HoldoutDataset {
 public:
  HoldoutDataset(RowMatrix features, std::vector<int> labels, int label_count);

  int n() const { return static_cast<int>(features_.rows()); }
  int dim() const { return static_cast<int>(features_.cols()); }
  int label_count() const { return label_count_; }
  const RowMatrix& features() const { return features_; }
  std::span<const double> row(int i) const {
    return {features_.row(i).data(), static_cast<std::size_t>(features_.cols())};
  }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  RowMatrix features_;
  std::vector<int> labels_;
  int label_count_;
};

/// Black-box probabilistic classifier: x -> probability simplex over labels.
/// Implementations must be deterministic in x and safe to call concurrently.
class ProbabilisticClassifier {
 public:
  virtual ~ProbabilisticClassifier() = default;
  virtual int label_count() const = 0;
  virtual SimplexVector predict(std::span<const double> x) const = 0;
};

/// One augmented record: (x, y, y', u, u'). x and y are views into the
/// source holdout sample; y' ~ Cat(eta_hat(x)); u, u' are the stored
/// tie-break uniforms drawn at augmentation time.
struct AugmentedRecord {
  int y;
  int y_prime;
  double u;
  double u_prime;
};

/// The coupled second sample: triplets (X_i, Y_i, Y'_i) plus tie-break
/// uniforms, all derived deterministically from (data, classifier, seed).
class AugmentedDataset {
 public:
  AugmentedDataset(std::shared_ptr<const HoldoutDataset> source,
                   std::vector<AugmentedRecord> records, std::uint64_t seed)
      : source_(std::move(source)), records_(std::move(records)), seed_(seed) {}

  int n() const { return static_cast<int>(records_.size()); }
  int dim() const { return source_->dim(); }
  int label_count() const { return source_->label_count(); }
  std::uint64_t seed() const { return seed_; }
  const HoldoutDataset& source() const { return *source_; }

  std::span<const double> x(int i) const { return source_->row(i); }
  int y(int i) const { return records_[static_cast<std::size_t>(i)].y; }
  int y_prime(int i) const { return records_[static_cast<std::size_t>(i)].y_prime; }
  double u(int i) const { return records_[static_cast<std::size_t>(i)].u; }
  double u_prime(int i) const { return records_[static_cast<std::size_t>(i)].u_prime; }
  const std::vector<AugmentedRecord>& records() const { return records_; }

 private:
  std::shared_ptr<const HoldoutDataset> source_;
  std::vector<AugmentedRecord> records_;
  std::uint64_t seed_;
};

/// Draws the second sample Y'_i ~ Cat(eta_hat(X_i)) and the tie-break
/// uniforms. Pure function of (data, classifier, seed).
AugmentedDataset augment(std::shared_ptr<const HoldoutDataset> data,
                         const ProbabilisticClassifier& eta_hat,
                         std::uint64_t seed);

/// Same, with the classifier given as per-row probabilities (one simplex
/// per holdout row, already validated). This is how file-backed predictions
/// enter the library.
AugmentedDataset augment_with_predictions(
    std::shared_ptr<const HoldoutDataset> data,
    const std::vector<SimplexVector>& predictions, std::uint64_t seed);

/// K-fold assignment of indices 0..n-1. Folds are contiguous blocks of a
/// seeded random permutation; the first (n mod K) folds get one extra
/// element, so sizes differ by at most one.
class FoldPartition {
 public:
  FoldPartition(int n, int fold_count, std::uint64_t seed);

  int n() const { return static_cast<int>(assignment_.size()); }
  int fold_count() const { return fold_count_; }
  int fold_of(int i) const { return assignment_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<int>& fold(int k) const { return folds_[static_cast<std::size_t>(k)]; }
  int fold_size(int k) const { return static_cast<int>(fold(k).size()); }
  /// All indices outside fold k, in ascending order.
  std::vector<int> complement(int k) const;

 private:
  std::vector<int> assignment_;
  std::vector<std::vector<int>> folds_;
  int fold_count_;
};

inline FoldPartition partition_folds(int n, int fold_count, std::uint64_t seed) {
  return FoldPartition(n, fold_count, seed);
}

}  // namespace cgof
