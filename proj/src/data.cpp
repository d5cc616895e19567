#include "cgof/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cgof/rng.hpp"

namespace cgof {

SimplexVector validate_simplex(std::span<const double> raw, int label_count) {
  if (static_cast<int>(raw.size()) != label_count) {
    fail(ErrorCode::BadArgument,
         "simplex row has " + std::to_string(raw.size()) + " entries, expected " +
             std::to_string(label_count));
  }
  SimplexVector out;
  out.probs.resize(raw.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double p = raw[k];
    if (!std::isfinite(p)) {
      fail(ErrorCode::BadArgument, "non-finite probability entry");
    }
    if (p < -1e-9) {
      fail(ErrorCode::NegativeProbability,
           "probability entry " + std::to_string(p) + " below zero");
    }
    out.probs[k] = p < 0.0 ? 0.0 : p;
    sum += out.probs[k];
  }
  if (sum < 1e-12) {
    fail(ErrorCode::DegenerateSum, "probability row sums to " + std::to_string(sum));
  }
  for (double& p : out.probs) p /= sum;
  return out;
}

HoldoutDataset::HoldoutDataset(RowMatrix features, std::vector<int> labels,
                               int label_count)
    : features_(std::move(features)), labels_(std::move(labels)),
      label_count_(label_count) {
  if (label_count_ < 2) fail(ErrorCode::BadArgument, "need at least two labels");
  if (features_.rows() < 1 || features_.cols() < 1) {
    fail(ErrorCode::BadArgument, "feature matrix must be nonempty");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    fail(ErrorCode::RowCountMismatch,
         "feature rows " + std::to_string(features_.rows()) + " vs labels " +
             std::to_string(labels_.size()));
  }
  if (!features_.allFinite()) {
    fail(ErrorCode::BadArgument, "feature matrix has non-finite entries");
  }
  for (const int y : labels_) {
    if (y < 0 || y >= label_count_) {
      fail(ErrorCode::BadArgument,
           "label " + std::to_string(y) + " outside [0, " +
               std::to_string(label_count_ - 1) + "]");
    }
  }
}

namespace {

AugmentedDataset augment_impl(
    std::shared_ptr<const HoldoutDataset> data,
    const std::function<SimplexVector(int, std::span<const double>)>& predict,
    std::uint64_t seed) {
  const int n = data->n();
  const int m = data->label_count();
  std::vector<AugmentedRecord> records(static_cast<std::size_t>(n));
  Rng rng(derive_seed(seed, 0x617567ULL));  // augmentation stream
  for (int i = 0; i < n; ++i) {
    SimplexVector probs = predict(i, data->row(i));
    if (probs.size() != m) {
      fail(ErrorCode::ClassifierFailure,
           "classifier returned " + std::to_string(probs.size()) +
               " probabilities, expected " + std::to_string(m));
    }
    AugmentedRecord& r = records[static_cast<std::size_t>(i)];
    r.y = data->label(i);
    r.y_prime = rng.categorical(probs.span());
    r.u = rng.uniform();
    r.u_prime = rng.uniform();
  }
  return AugmentedDataset(std::move(data), std::move(records), seed);
}

}  // namespace

AugmentedDataset augment(std::shared_ptr<const HoldoutDataset> data,
                         const ProbabilisticClassifier& eta_hat,
                         std::uint64_t seed) {
  if (eta_hat.label_count() != data->label_count()) {
    fail(ErrorCode::ClassifierFailure, "classifier label count mismatch");
  }
  return augment_impl(
      std::move(data),
      [&](int, std::span<const double> x) {
        SimplexVector p;
        try {
          p = eta_hat.predict(x);
        } catch (const Error&) {
          throw;
        } catch (const std::exception& e) {
          fail(ErrorCode::ClassifierFailure, std::string("predict failed: ") + e.what());
        }
        return validate_simplex(p.span(), static_cast<int>(p.probs.size()));
      },
      seed);
}

AugmentedDataset augment_with_predictions(
    std::shared_ptr<const HoldoutDataset> data,
    const std::vector<SimplexVector>& predictions, std::uint64_t seed) {
  if (static_cast<int>(predictions.size()) != data->n()) {
    fail(ErrorCode::RowCountMismatch,
         "predictions rows " + std::to_string(predictions.size()) +
             " vs holdout rows " + std::to_string(data->n()));
  }
  return augment_impl(
      std::move(data),
      [&](int i, std::span<const double>) { return predictions[static_cast<std::size_t>(i)]; },
      seed);
}

FoldPartition::FoldPartition(int n, int fold_count, std::uint64_t seed)
    : fold_count_(fold_count) {
  if (fold_count < 2 || fold_count > n) {
    fail(ErrorCode::BadFoldCount,
         "fold count " + std::to_string(fold_count) + " outside [2, " +
             std::to_string(n) + "]");
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, 0x666f6c64ULL));  // fold stream
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  assignment_.assign(static_cast<std::size_t>(n), -1);
  folds_.resize(static_cast<std::size_t>(fold_count));
  const int base = n / fold_count;
  const int extra = n % fold_count;
  int pos = 0;
  for (int k = 0; k < fold_count; ++k) {
    const int size_k = base + (k < extra ? 1 : 0);
    auto& fold = folds_[static_cast<std::size_t>(k)];
    fold.reserve(static_cast<std::size_t>(size_k));
    for (int t = 0; t < size_k; ++t, ++pos) {
      fold.push_back(perm[static_cast<std::size_t>(pos)]);
      assignment_[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = k;
    }
  }
}

std::vector<int> FoldPartition::complement(int k) const {
  std::vector<int> out;
  out.reserve(assignment_.size() - folds_[static_cast<std::size_t>(k)].size());
  for (int i = 0; i < n(); ++i) {
    if (assignment_[static_cast<std::size_t>(i)] != k) out.push_back(i);
  }
  return out;
}

}  // namespace cgof
