#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgof/oracle.hpp"
#include "cgof/ranksum.hpp"

namespace cgof {

struct VarianceEstimate {
  double sigma2_hat = 0.0;
  std::vector<double> per_fold;  // cross-fit only
  bool floored = false;
};

inline constexpr double kVarianceFloor = 1e-12;

/// Empirical variance of phi_hat + psi_hat around 2T with divisor n2 - 1,
/// floored at 1e-12 so the standardized statistic never divides by zero.
VarianceEstimate sigma_split(const ProjectionValues& proj, double T);

/// Per-fold split estimates (centered at that fold's T), averaged unweighted.
VarianceEstimate sigma_cross(std::span<const ProjectionValues> per_fold_proj,
                             std::span<const double> per_fold_T);

struct HajekReport {
  double residual = 0.0;  // |T_k - mu - Phi_k - Psi_k|
  double scaled = 0.0;    // sqrt(n_k) * residual
};

/// Hajek linearization residual of a fold statistic. Phi_k and Psi_k are
/// formed from the supplied projection values (empirical or oracle).
HajekReport hajek_residual(double fold_T, std::span<const double> phi,
                           std::span<const double> psi, double mu_hat);

struct StabilityReport {
  std::vector<double> deltas;  // pooled |g(probe) - g_perturbed(probe)|
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double scaled_p99 = 0.0;  // p99 * sqrt(n)
};

/// Perturb-one diagnostic: refit after replacing one random record with a
/// fresh draw and record score changes at fresh probe points. Reported,
/// never enforced.
StabilityReport perturb_one_stability(const DistinguisherProcedure& procedure,
                                      const GenerativeModel& model, int n, int reps,
                                      int probe_count, std::uint64_t seed);

}  // namespace cgof
