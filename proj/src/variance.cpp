#include "cgof/variance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgof/parallel.hpp"

namespace cgof {

VarianceEstimate sigma_split(const ProjectionValues& proj, double T) {
  const std::size_t n2 = proj.phi_hat.size();
  if (n2 < 2 || proj.psi_hat.size() != n2) {
    fail(ErrorCode::TooFewEvaluations, "sigma_split: need at least two evaluations");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    const double dev = proj.phi_hat[i] + proj.psi_hat[i] - 2.0 * T;
    acc += dev * dev;
  }
  VarianceEstimate out;
  out.sigma2_hat = acc / static_cast<double>(n2 - 1);
  if (out.sigma2_hat < kVarianceFloor) {
    out.sigma2_hat = kVarianceFloor;
    out.floored = true;
  }
  return out;
}

VarianceEstimate sigma_cross(std::span<const ProjectionValues> per_fold_proj,
                             std::span<const double> per_fold_T) {
  if (per_fold_proj.size() < 2 || per_fold_proj.size() != per_fold_T.size()) {
    fail(ErrorCode::TooFewEvaluations, "sigma_cross: need K >= 2 folds");
  }
  VarianceEstimate out;
  out.per_fold.reserve(per_fold_proj.size());
  double total = 0.0;
  for (std::size_t k = 0; k < per_fold_proj.size(); ++k) {
    const VarianceEstimate fold = sigma_split(per_fold_proj[k], per_fold_T[k]);
    out.per_fold.push_back(fold.sigma2_hat);
    out.floored = out.floored || fold.floored;
    total += fold.sigma2_hat;
  }
  out.sigma2_hat = std::max(total / static_cast<double>(per_fold_proj.size()),
                            kVarianceFloor);
  return out;
}

HajekReport hajek_residual(double fold_T, std::span<const double> phi,
                           std::span<const double> psi, double mu_hat) {
  double phi_mean = 0.0, psi_mean = 0.0;
  for (const double v : phi) phi_mean += v;
  for (const double v : psi) psi_mean += v;
  const double nk = static_cast<double>(phi.size());
  if (!phi.empty()) phi_mean /= nk;
  if (!psi.empty()) psi_mean /= static_cast<double>(psi.size());
  const double big_phi = phi_mean - mu_hat;
  const double big_psi = psi_mean - mu_hat;
  HajekReport out;
  out.residual = std::abs(fold_T - mu_hat - big_phi - big_psi);
  out.scaled = std::sqrt(std::max(nk, 1.0)) * out.residual;
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size());
  std::size_t idx = pos <= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(pos)) - 1;
  idx = std::min(idx, sorted.size() - 1);
  return sorted[idx];
}

}  // namespace

StabilityReport perturb_one_stability(const DistinguisherProcedure& procedure,
                                      const GenerativeModel& model, int n, int reps,
                                      int probe_count, std::uint64_t seed) {
  if (n < 1 || reps < 1 || probe_count < 1) {
    fail(ErrorCode::BadArgument, "perturb_one_stability: bad sizes");
  }
  const int d = model.dim();
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;

  std::vector<std::vector<double>> per_rep(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(seed, 0x5354 + r);
    const AugmentedDataset base = sample_augmented(model, n, rep_seed);
    const auto g = procedure.fit(base, all, derive_seed(rep_seed, 1));

    // replace one random record with a fresh iid triplet
    Rng rng(derive_seed(rep_seed, 2));
    const int victim = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    RowMatrix features = base.source().features();
    std::vector<int> labels = base.source().labels();
    std::vector<AugmentedRecord> records = base.records();
    std::span<double> row(features.row(victim).data(), static_cast<std::size_t>(d));
    model.sample_x(rng, row);
    const int y_new = rng.categorical(model.eta(row).span());
    labels[static_cast<std::size_t>(victim)] = y_new;
    auto& rec = records[static_cast<std::size_t>(victim)];
    rec.y = y_new;
    rec.y_prime = rng.categorical(model.eta_hat(row).span());
    rec.u = rng.uniform();
    rec.u_prime = rng.uniform();
    auto holdout = std::make_shared<HoldoutDataset>(std::move(features), std::move(labels),
                                                    base.label_count());
    const AugmentedDataset perturbed(std::move(holdout), std::move(records), rep_seed);
    const auto g_i = procedure.fit(perturbed, all, derive_seed(rep_seed, 1));

    // probe at fresh points, alternating real/synthetic label draws
    auto& deltas = per_rep[r];
    deltas.reserve(static_cast<std::size_t>(probe_count));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int p = 0; p < probe_count; ++p) {
      model.sample_x(rng, x);
      const int y = (p % 2 == 0) ? rng.categorical(model.eta(x).span())
                                 : rng.categorical(model.eta_hat(x).span());
      deltas.push_back(std::abs(g->score(x, y) - g_i->score(x, y)));
    }
  });

  StabilityReport out;
  out.deltas.reserve(static_cast<std::size_t>(reps) * static_cast<std::size_t>(probe_count));
  for (const auto& v : per_rep) out.deltas.insert(out.deltas.end(), v.begin(), v.end());
  std::vector<double> sorted = out.deltas;
  std::sort(sorted.begin(), sorted.end());
  out.p50 = quantile_sorted(sorted, 0.50);
  out.p90 = quantile_sorted(sorted, 0.90);
  out.p99 = quantile_sorted(sorted, 0.99);
  out.scaled_p99 = out.p99 * std::sqrt(static_cast<double>(n));
  return out;
}

}  // namespace cgof
