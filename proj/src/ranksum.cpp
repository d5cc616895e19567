#include "cgof/ranksum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cgof/rng.hpp"

namespace cgof {

namespace {

using Key = std::pair<double, double>;  // (score, tie-break uniform), <lex

std::vector<Key> make_keys(const std::vector<double>& s, const std::vector<double>& u,
                           bool tie_break) {
  std::vector<Key> keys(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    keys[i] = {s[i], tie_break ? u[i] : 0.0};
  }
  return keys;
}

void check_pair(const ScoredPair& pair) {
  if (pair.s0.empty()) fail(ErrorCode::EmptyInput, "rank statistic on empty scores");
  if (pair.s0.size() != pair.s1.size() || pair.s0.size() != pair.u0.size() ||
      pair.s1.size() != pair.u1.size()) {
    fail(ErrorCode::BadArgument, "scored pair arrays have mismatched lengths");
  }
}

}  // namespace

double rank_sum(const ScoredPair& pair, bool tie_break) {
  check_pair(pair);
  std::vector<Key> k0 = make_keys(pair.s0, pair.u0, tie_break);
  std::vector<Key> k1 = make_keys(pair.s1, pair.u1, tie_break);
  std::sort(k0.begin(), k0.end());
  std::sort(k1.begin(), k1.end());
  // sum over sorted k1 of how many k0 lie strictly below
  std::uint64_t count = 0;
  std::size_t p = 0;
  for (const Key& key : k1) {
    while (p < k0.size() && k0[p] < key) ++p;
    count += p;
  }
  const double m = static_cast<double>(pair.s0.size());
  return static_cast<double>(count) / (m * m);
}

ProjectionValues empirical_projections(const ScoredPair& pair, bool tie_break) {
  check_pair(pair);
  const std::size_t m = pair.s0.size();
  std::vector<Key> k0 = make_keys(pair.s0, pair.u0, tie_break);
  std::vector<Key> k1 = make_keys(pair.s1, pair.u1, tie_break);
  std::vector<Key> k0_sorted = k0;
  std::vector<Key> k1_sorted = k1;
  std::sort(k0_sorted.begin(), k0_sorted.end());
  std::sort(k1_sorted.begin(), k1_sorted.end());

  ProjectionValues out;
  out.phi_hat.resize(m);
  out.psi_hat.resize(m);
  const double dm = static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    // phi_hat[i]: fraction of synthetic keys strictly above key0_i
    const auto above =
        k1_sorted.end() - std::upper_bound(k1_sorted.begin(), k1_sorted.end(), k0[i]);
    out.phi_hat[i] = static_cast<double>(above) / dm;
    // psi_hat[i]: fraction of real keys strictly below key1_i
    const auto below =
        std::lower_bound(k0_sorted.begin(), k0_sorted.end(), k1[i]) - k0_sorted.begin();
    out.psi_hat[i] = static_cast<double>(below) / dm;
  }
  return out;
}

ScoredPair score_records(const AugmentedDataset& aug, std::span<const int> eval_indices,
                         const Distinguisher& g) {
  ScoredPair pair;
  pair.s0.reserve(eval_indices.size());
  pair.s1.reserve(eval_indices.size());
  pair.u0.reserve(eval_indices.size());
  pair.u1.reserve(eval_indices.size());
  for (const int i : eval_indices) {
    const double s0 = g.score(aug.x(i), aug.y(i));
    const double s1 = g.score(aug.x(i), aug.y_prime(i));
    if (!std::isfinite(s0) || !std::isfinite(s1) || s0 < 0.0 || s0 > 1.0 || s1 < 0.0 ||
        s1 > 1.0) {
      fail(ErrorCode::NumericalFailure,
           "distinguisher returned a score outside [0, 1] at record " + std::to_string(i));
    }
    pair.s0.push_back(s0);
    pair.u0.push_back(aug.u(i));
    pair.s1.push_back(s1);
    pair.u1.push_back(aug.u_prime(i));
  }
  return pair;
}

SplitStatistic t_split(const AugmentedDataset& aug, std::span<const int> fit_indices,
                       std::span<const int> eval_indices,
                       const DistinguisherProcedure& procedure, std::uint64_t seed) {
  if (fit_indices.empty() || eval_indices.empty()) {
    fail(ErrorCode::EmptyInput, "t_split: both splits must be nonempty");
  }
  std::vector<char> seen(static_cast<std::size_t>(aug.n()), 0);
  for (const int i : fit_indices) seen[static_cast<std::size_t>(i)] += 1;
  for (const int i : eval_indices) seen[static_cast<std::size_t>(i)] += 1;
  for (const char c : seen) {
    if (c != 1) fail(ErrorCode::BadArgument, "t_split: splits must partition the records");
  }

  SplitStatistic out;
  out.distinguisher = procedure.fit(aug, fit_indices, derive_seed(seed, 0xF17ULL));
  out.pair = score_records(aug, eval_indices, *out.distinguisher);
  out.T = rank_sum(out.pair, /*tie_break=*/true);
  return out;
}

CrossStatistic t_cross(const AugmentedDataset& aug, const FoldPartition& folds,
                       const DistinguisherProcedure& procedure, std::uint64_t seed) {
  if (folds.fold_count() < 2) fail(ErrorCode::BadFoldCount, "t_cross: need K >= 2");
  if (folds.n() != aug.n()) {
    fail(ErrorCode::BadArgument, "t_cross: partition size does not match dataset");
  }
  CrossStatistic out;
  out.folds.resize(static_cast<std::size_t>(folds.fold_count()));
  double total = 0.0;
  for (int k = 0; k < folds.fold_count(); ++k) {
    FoldStatistic& fs = out.folds[static_cast<std::size_t>(k)];
    const std::vector<int> train = folds.complement(k);
    fs.distinguisher =
        procedure.fit(aug, train, derive_seed(seed, 0x100 + static_cast<std::uint64_t>(k)));
    fs.pair = score_records(aug, folds.fold(k), *fs.distinguisher);
    fs.T = rank_sum(fs.pair, /*tie_break=*/true);
    fs.fold_size = folds.fold_size(k);
    total += fs.T;
  }
  out.T = total / static_cast<double>(folds.fold_count());
  return out;
}

}  // namespace cgof
