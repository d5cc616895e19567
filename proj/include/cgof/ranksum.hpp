#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cgof/data.hpp"
#include "cgof/distinguish.hpp"

namespace cgof {

/// Scores of the two coupled evaluation samples plus their stored tie-break
/// uniforms: s0[i] = g(x_i, y_i), s1[i] = g(x_i, y'_i) over the same
/// evaluation indices.
struct ScoredPair {
  std::vector<double> s0;
  std::vector<double> u0;
  std::vector<double> s1;
  std::vector<double> u1;

  int size() const { return static_cast<int>(s0.size()); }
};

/// Per-index empirical projections: phi_hat[i] is the fraction of synthetic
/// points outranking real point i; psi_hat[j] the fraction of real points
/// outranked by synthetic point j. mean(phi_hat) = mean(psi_hat) = T.
struct ProjectionValues {
  std::vector<double> phi_hat;
  std::vector<double> psi_hat;
};

/// Rank-sum statistic T = (1/m^2) sum_{i,j} R_ij in [0, 1].
///
/// With tie_break, R~_ij = 1(s0_i < s1_j) + 1(u0_i < u1_j) 1(s0_i = s1_j),
/// equivalently a strict comparison of the lexicographic keys (score, u).
/// Sort-merge implementation, O(m log m); the O(m^2) double loop lives in
/// the test suite as an oracle.
double rank_sum(const ScoredPair& pair, bool tie_break = true);

ProjectionValues empirical_projections(const ScoredPair& pair, bool tie_break = true);

/// Scores the evaluation records of an augmented dataset with a fitted
/// distinguisher, pairing (x_i, y_i) against (x_i, y'_i) with their stored
/// uniforms.
ScoredPair score_records(const AugmentedDataset& aug, std::span<const int> eval_indices,
                         const Distinguisher& g);

struct SplitStatistic {
  double T = 0.0;
  std::shared_ptr<const Distinguisher> distinguisher;
  ScoredPair pair;
};

/// Algorithm step: fit on I1, evaluate the tie-broken rank sum over I2.
SplitStatistic t_split(const AugmentedDataset& aug, std::span<const int> fit_indices,
                       std::span<const int> eval_indices,
                       const DistinguisherProcedure& procedure, std::uint64_t seed);

struct FoldStatistic {
  double T = 0.0;
  int fold_size = 0;
  std::shared_ptr<const Distinguisher> distinguisher;
  ScoredPair pair;
};

struct CrossStatistic {
  double T = 0.0;  // unweighted average of the per-fold statistics
  std::vector<FoldStatistic> folds;
};

/// For each fold: fit out-of-fold, evaluate the within-fold rank sum; the
/// cross statistic is the unweighted fold average.
CrossStatistic t_cross(const AugmentedDataset& aug, const FoldPartition& folds,
                       const DistinguisherProcedure& procedure, std::uint64_t seed);

}  // namespace cgof
