#include "cgof/testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cgof/ranksum.hpp"
#include "cgof/rng.hpp"

namespace cgof {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Acklam's rational approximation, |relative error| < 1.15e-9 before refinement.
double quantile_seed(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorCode::OutOfRange, "normal_quantile: p must lie in (0, 1)");
  }
  double x = quantile_seed(p);
  // one Halley step against the erfc-based CDF
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

double normal_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double delta_min(double T, double sigma_hat, int n_eff, double alpha) {
  const double q = normal_quantile(1.0 - alpha);
  const double bound = T - 0.5 - sigma_hat * q / std::sqrt(static_cast<double>(n_eff));
  return std::max(bound, 0.0);
}

namespace {

void check_config(const TestConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    fail(ErrorCode::BadArgument, "alpha must lie in (0, 1)");
  }
  if (!(cfg.delta >= 0.0 && cfg.delta <= 0.5)) {
    fail(ErrorCode::BadArgument, "delta must lie in [0, 0.5]");
  }
}

TestReport finish_report(TestReport report, double sigma2, const TestConfig& cfg) {
  const double sigma = std::sqrt(sigma2);
  const double root_n = std::sqrt(static_cast<double>(report.n_eval));
  report.sigma2_hat = sigma2;
  report.z_stat = root_n * (report.T - cfg.delta - 0.5) / sigma;
  report.p_value = normal_tail(report.z_stat);
  report.reject = report.z_stat > normal_quantile(1.0 - cfg.alpha);
  report.delta_min = delta_min(report.T, sigma, report.n_eval, cfg.alpha);
  return report;
}

}  // namespace

TestReport run_split_test(const AugmentedDataset& aug,
                          const DistinguisherProcedure& procedure,
                          const TestConfig& cfg) {
  check_config(cfg);
  const int n = aug.n();
  if (n < 4) fail(ErrorCode::BadArgument, "run_split_test: need n >= 4");
  if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0)) {
    fail(ErrorCode::BadArgument, "split_fraction must lie in (0, 1)");
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(cfg.seed, 0x73706c69ULL));  // split stream
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  int n1 = static_cast<int>(std::lround(cfg.split_fraction * n));
  n1 = std::clamp(n1, 1, n - 2);  // evaluation side needs n2 >= 2
  const std::span<const int> fit(perm.data(), static_cast<std::size_t>(n1));
  const std::span<const int> eval(perm.data() + n1, static_cast<std::size_t>(n - n1));

  const SplitStatistic stat = t_split(aug, fit, eval, procedure, cfg.seed);
  const ProjectionValues proj = empirical_projections(stat.pair, /*tie_break=*/true);
  const VarianceEstimate var = sigma_split(proj, stat.T);

  TestReport report;
  report.kind = ProcedureKind::Split;
  report.alpha = cfg.alpha;
  report.delta = cfg.delta;
  report.seed = cfg.seed;
  report.T = stat.T;
  report.n = n;
  report.n_eval = n - n1;
  return finish_report(std::move(report), var.sigma2_hat, cfg);
}

TestReport run_cross_test(const AugmentedDataset& aug,
                          const DistinguisherProcedure& procedure,
                          const TestConfig& cfg) {
  check_config(cfg);
  const int n = aug.n();
  if (cfg.fold_count < 2) fail(ErrorCode::BadFoldCount, "run_cross_test: need K >= 2");
  if (n < 2 * cfg.fold_count) {
    fail(ErrorCode::BadArgument, "run_cross_test: need n >= 2K");
  }
  const FoldPartition folds(n, cfg.fold_count, derive_seed(cfg.seed, 0x6364ULL));
  const CrossStatistic stat = t_cross(aug, folds, procedure, cfg.seed);

  std::vector<ProjectionValues> per_fold_proj;
  std::vector<double> per_fold_T;
  per_fold_proj.reserve(stat.folds.size());
  per_fold_T.reserve(stat.folds.size());
  for (const FoldStatistic& fs : stat.folds) {
    per_fold_proj.push_back(empirical_projections(fs.pair, /*tie_break=*/true));
    per_fold_T.push_back(fs.T);
  }
  const VarianceEstimate var = sigma_cross(per_fold_proj, per_fold_T);

  TestReport report;
  report.kind = ProcedureKind::Cross;
  report.alpha = cfg.alpha;
  report.delta = cfg.delta;
  report.seed = cfg.seed;
  report.T = stat.T;
  report.n = n;
  report.n_eval = n;
  report.per_fold.reserve(stat.folds.size());
  for (std::size_t k = 0; k < stat.folds.size(); ++k) {
    report.per_fold.push_back(
        {stat.folds[k].T, var.per_fold[k], stat.folds[k].fold_size});
  }
  return finish_report(std::move(report), var.sigma2_hat, cfg);
}

TestReport run_test(const AugmentedDataset& aug, const DistinguisherProcedure& procedure,
                    const TestConfig& cfg) {
  return cfg.kind == ProcedureKind::Split ? run_split_test(aug, procedure, cfg)
                                          : run_cross_test(aug, procedure, cfg);
}

}  // namespace cgof
