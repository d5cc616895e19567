#include "cgof/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cgof/parallel.hpp"

namespace cgof {

namespace {

using Clock = std::chrono::steady_clock;

const char* setting_name(Setting s) {
  return s == Setting::Logistic ? "logistic" : "sparse";
}
const char* kind_name(DistinguisherKind k) {
  switch (k) {
    case DistinguisherKind::Logistic: return "logistic";
    case DistinguisherKind::Lasso: return "lasso";
    default: return "constant";
  }
}
const char* procedure_name(ProcedureKind k) {
  return k == ProcedureKind::Split ? "split" : "cross";
}

struct RepOutcome {
  double T = 0.0;
  double sigma2 = 0.0;
  double z_at_zero = 0.0;  // standardized statistic at delta = 0
  double root_n = 0.0;
  double sigma = 0.0;
};

/// One test per replication; the delta and alpha grids only move the
/// rejection threshold, so z is re-centered per grid point afterwards.
std::vector<RepOutcome> replicate(const GenerativeModel& model,
                                  const DistinguisherProcedure& procedure,
                                  ProcedureKind kind, const ExperimentSpec& spec) {
  std::vector<RepOutcome> out(static_cast<std::size_t>(spec.reps));
  parallel_for(static_cast<std::size_t>(spec.reps), [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(spec.seed, 0xEE00 + r);
    const AugmentedDataset aug = sample_augmented(model, spec.n, rep_seed);
    TestConfig cfg;
    cfg.alpha = spec.alphas.front();
    cfg.delta = 0.0;
    cfg.kind = kind;
    cfg.fold_count = spec.fold_count;
    cfg.split_fraction = spec.split_fraction;
    cfg.seed = derive_seed(rep_seed, 1);
    const TestReport report = run_test(aug, procedure, cfg);
    RepOutcome& o = out[r];
    o.T = report.T;
    o.sigma2 = report.sigma2_hat;
    o.sigma = std::sqrt(report.sigma2_hat);
    o.root_n = std::sqrt(static_cast<double>(report.n_eval));
    o.z_at_zero = report.z_stat;
  });
  return out;
}

ResultRow summarize(const std::vector<RepOutcome>& outcomes, double alpha, double delta) {
  const double q = normal_quantile(1.0 - alpha);
  int rejections = 0;
  double mean_T = 0.0, mean_s2 = 0.0;
  for (const RepOutcome& o : outcomes) {
    const double z = o.root_n * (o.T - delta - 0.5) / o.sigma;
    rejections += z > q;
    mean_T += o.T;
    mean_s2 += o.sigma2;
  }
  const double reps = static_cast<double>(outcomes.size());
  ResultRow row;
  row.reps = static_cast<int>(outcomes.size());
  row.alpha = alpha;
  row.delta = delta;
  row.rejection_rate = rejections / reps;
  row.mean_T = mean_T / reps;
  row.mean_sigma2 = mean_s2 / reps;
  row.mc_se = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / reps);
  return row;
}

std::vector<ProcedureKind> requested(SimProcedure p) {
  switch (p) {
    case SimProcedure::Split: return {ProcedureKind::Split};
    case SimProcedure::Cross: return {ProcedureKind::Cross};
    default: return {ProcedureKind::Split, ProcedureKind::Cross};
  }
}

}  // namespace

Eigen::VectorXd make_theta_star(Setting setting, int d, std::uint64_t theta_seed) {
  Eigen::VectorXd theta(d);
  if (setting == Setting::Sparse) {
    theta.setZero();
    for (int j = 0; j < std::min(d, 5); ++j) theta[j] = 1.0;
    return theta;
  }
  Rng rng(derive_seed(theta_seed, 0x7468ULL));
  for (int j = 0; j < d; ++j) theta[j] = 0.25 * rng.normal();
  return theta;
}

std::shared_ptr<const DistinguisherProcedure> make_procedure(DistinguisherKind kind) {
  switch (kind) {
    case DistinguisherKind::Lasso: return std::make_shared<LassoDistinguisherProcedure>();
    case DistinguisherKind::Constant: return std::make_shared<ConstantProcedure>();
    default: return std::make_shared<LogisticSplitProcedure>();
  }
}

ExperimentResult run_type1(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  const Eigen::VectorXd theta = make_theta_star(spec.setting, spec.d, spec.theta_seed);
  const LogisticGenerativeModel model(theta, theta);  // exact null
  const auto procedure = make_procedure(spec.distinguisher);

  ExperimentResult result;
  for (const ProcedureKind kind : requested(spec.procedure)) {
    const std::vector<RepOutcome> outcomes = replicate(model, *procedure, kind, spec);
    for (const double alpha : spec.alphas) {
      ResultRow row = summarize(outcomes, alpha, 0.0);
      row.setting = setting_name(spec.setting);
      row.procedure = procedure_name(kind);
      row.distinguisher = kind_name(spec.distinguisher);
      row.n = spec.n;
      row.fold_count = kind == ProcedureKind::Cross ? spec.fold_count : 0;
      row.delta_ratio = 0.0;
      row.seed = spec.seed;
      result.rows.push_back(std::move(row));
    }
  }
  result.runtime_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

namespace {

ExperimentResult run_alternative(const ExperimentSpec& spec,
                                 std::vector<DistinguisherKind> kinds,
                                 std::vector<ProcedureKind> procedures) {
  const auto start = Clock::now();
  const Eigen::VectorXd theta = make_theta_star(spec.setting, spec.d, spec.theta_seed);
  const LogisticGenerativeModel model(theta, -theta);

  ExperimentResult result;
  const SeparationEstimate sep =
      separation(model, spec.oracle_draws, derive_seed(spec.seed, 0xDE17A0ULL));
  result.delta_star = sep.rho;
  result.delta_star_se = sep.mc_se;

  for (const DistinguisherKind dk : kinds) {
    const auto procedure = make_procedure(dk);
    for (const ProcedureKind kind : procedures) {
      const std::vector<RepOutcome> outcomes = replicate(model, *procedure, kind, spec);
      for (const double alpha : spec.alphas) {
        for (const double ratio : spec.delta_ratios) {
          const double delta = std::clamp(ratio * result.delta_star, 0.0, 0.5);
          ResultRow row = summarize(outcomes, alpha, delta);
          row.setting = setting_name(spec.setting);
          row.procedure = procedure_name(kind);
          row.distinguisher = kind_name(dk);
          row.n = spec.n;
          row.fold_count = kind == ProcedureKind::Cross ? spec.fold_count : 0;
          row.delta_ratio = ratio;
          row.seed = spec.seed;
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  result.runtime_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace

ExperimentResult run_power(const ExperimentSpec& spec) {
  return run_alternative(spec, {spec.distinguisher}, requested(spec.procedure));
}

ExperimentResult run_sparse(const ExperimentSpec& spec) {
  ExperimentSpec sparse_spec = spec;
  sparse_spec.setting = Setting::Sparse;
  return run_alternative(sparse_spec,
                         {DistinguisherKind::Lasso, DistinguisherKind::Logistic},
                         {ProcedureKind::Cross});
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::BadArgument, "cannot open " + path + " for writing");
  out << "setting,procedure,distinguisher,n,K,alpha,delta,delta_ratio,reps,"
         "rejection_rate,mean_T,mean_sigma2,mc_se,seed\n";
  for (const ResultRow& r : rows) {
    out << r.setting << ',' << r.procedure << ',' << r.distinguisher << ',' << r.n << ','
        << r.fold_count << ',' << fmt(r.alpha) << ',' << fmt(r.delta) << ','
        << fmt(r.delta_ratio) << ',' << r.reps << ',' << fmt(r.rejection_rate) << ','
        << fmt(r.mean_T) << ',' << fmt(r.mean_sigma2) << ',' << fmt(r.mc_se) << ','
        << r.seed << '\n';
  }
}

void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const ExperimentResult& result) {
  nlohmann::ordered_json summary;
  summary["setting"] = setting_name(spec.setting);
  summary["n"] = spec.n;
  summary["d"] = spec.d;
  summary["reps"] = spec.reps;
  summary["K"] = spec.fold_count;
  summary["seed"] = spec.seed;
  summary["theta_seed"] = spec.theta_seed;
  summary["delta_star"] = result.delta_star;
  summary["delta_star_se"] = result.delta_star_se;
  summary["runtime_seconds"] = result.runtime_seconds;
  summary["rows"] = nlohmann::ordered_json::array();
  for (const ResultRow& r : result.rows) {
    summary["rows"].push_back({{"procedure", r.procedure},
                               {"distinguisher", r.distinguisher},
                               {"alpha", r.alpha},
                               {"delta", r.delta},
                               {"delta_ratio", r.delta_ratio},
                               {"rejection_rate", r.rejection_rate},
                               {"mean_T", r.mean_T},
                               {"mean_sigma2", r.mean_sigma2},
                               {"mc_se", r.mc_se}});
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::BadArgument, "cannot open " + path + " for writing");
  out << summary.dump(2) << '\n';
}

}  // namespace cgof
