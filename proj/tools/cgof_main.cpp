// cgof: tolerance goodness-of-fit testing for black-box probabilistic
// classifiers. Subcommands: test (file-backed data), simulate (synthetic
// studies), diagnose (estimator diagnostics).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "cgof/parallel.hpp"
#include "cgof/report_io.hpp"
#include "cgof/sim.hpp"

namespace {

using nlohmann::ordered_json;

struct TestArgs {
  std::string data_path;
  std::string preds_path;
  double alpha = 0.05;
  double delta = 0.0;
  std::string method = "cross";
  int k = 5;
  double split_frac = 0.5;
  std::string distinguisher = "logistic";
  std::uint64_t seed = 0;
  std::string out_path;
  bool diagnostics = false;
};

struct SimArgs {
  std::string setting = "logistic";
  std::string experiment = "type1";
  int n = 1000;
  int d = 200;
  int reps = 200;
  std::vector<double> alphas = {0.05};
  std::vector<double> delta_ratios = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::string method = "both";
  int k = 5;
  double split_frac = 0.5;
  std::string distinguisher = "logistic";
  std::uint64_t seed = 20250809;
  std::uint64_t theta_seed = 42;
  long oracle_draws = 1000000;
  std::string out_dir = ".";
};

struct DiagArgs {
  std::string check = "stability";
  int n = 200;
  int d = 10;
  int n4 = 0;  // optional second size, 0 = skip
  int reps = 20;
  int probes = 50;
  int k = 5;
  long draws = 100000;
  std::string distinguisher = "logistic";
  std::string setting = "logistic";
  bool null_model = false;  // theta_hat = theta* instead of -theta*
  std::uint64_t seed = 1;
  std::uint64_t theta_seed = 42;
  std::string out_path;
};

void write_json(const std::string& path, const ordered_json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) cgof::fail(cgof::ErrorCode::BadArgument, "cannot open " + path);
  out << text;
}

cgof::SimProcedure parse_method_multi(const std::string& m) {
  if (m == "split") return cgof::SimProcedure::Split;
  if (m == "cross") return cgof::SimProcedure::Cross;
  if (m == "both") return cgof::SimProcedure::Both;
  cgof::fail(cgof::ErrorCode::BadArgument, "unknown method '" + m + "'");
}

cgof::DistinguisherKind parse_distinguisher(const std::string& d) {
  if (d == "logistic") return cgof::DistinguisherKind::Logistic;
  if (d == "lasso") return cgof::DistinguisherKind::Lasso;
  if (d == "constant") return cgof::DistinguisherKind::Constant;
  cgof::fail(cgof::ErrorCode::BadArgument, "unknown distinguisher '" + d + "'");
}

int cmd_test(const TestArgs& args) {
  const cgof::CsvTable preds_table = cgof::read_csv(args.preds_path);
  const cgof::CsvTable data_table = cgof::read_csv(args.data_path);
  auto holdout = cgof::parse_holdout_csv(
      data_table, static_cast<int>(preds_table.header.size()));
  const auto preds = cgof::parse_predictions_csv(preds_table, holdout->n());
  const cgof::AugmentedDataset aug =
      cgof::augment_with_predictions(holdout, preds, args.seed);

  cgof::TestConfig cfg;
  cfg.alpha = args.alpha;
  cfg.delta = args.delta;
  if (args.method == "split") {
    cfg.kind = cgof::ProcedureKind::Split;
  } else if (args.method == "cross") {
    cfg.kind = cgof::ProcedureKind::Cross;
  } else {
    cgof::fail(cgof::ErrorCode::BadArgument, "unknown method '" + args.method + "'");
  }
  cfg.fold_count = args.k;
  cfg.split_fraction = args.split_frac;
  cfg.seed = args.seed;
  const auto procedure = cgof::make_procedure(parse_distinguisher(args.distinguisher));

  const cgof::TestReport report = cgof::run_test(aug, *procedure, cfg);
  ordered_json j = cgof::report_to_json(report);
  if (args.diagnostics && !report.per_fold.empty()) {
    // algebraic-identity form: no generative model is available for file
    // data, so mu_hat is the pooled statistic and the residual reduces to
    // |mu_hat - T_k| per fold
    std::vector<cgof::HajekReport> hajek;
    for (const cgof::FoldDetail& f : report.per_fold) {
      cgof::HajekReport h;
      h.residual = std::abs(report.T - f.T);
      h.scaled = std::sqrt(static_cast<double>(f.size)) * h.residual;
      hajek.push_back(h);
    }
    j["diagnostics"] = {{"hajek", cgof::hajek_to_json(hajek, report.T)}};
  }
  write_json(args.out_path, j);
  return 0;
}

int cmd_simulate(const SimArgs& args) {
  cgof::ExperimentSpec spec;
  if (args.setting == "logistic") {
    spec.setting = cgof::Setting::Logistic;
  } else if (args.setting == "sparse") {
    spec.setting = cgof::Setting::Sparse;
  } else {
    cgof::fail(cgof::ErrorCode::BadArgument, "unknown setting '" + args.setting + "'");
  }
  spec.n = args.n;
  spec.d = args.d;
  spec.reps = args.reps;
  spec.alphas = args.alphas;
  spec.delta_ratios = args.delta_ratios;
  spec.theta_seed = args.theta_seed;
  spec.distinguisher = parse_distinguisher(args.distinguisher);
  spec.procedure = parse_method_multi(args.method);
  spec.fold_count = args.k;
  spec.split_fraction = args.split_frac;
  spec.seed = args.seed;
  spec.oracle_draws = args.oracle_draws;

  cgof::ExperimentResult result;
  if (args.experiment == "type1") {
    result = cgof::run_type1(spec);
  } else if (args.experiment == "power") {
    result = cgof::run_power(spec);
  } else if (args.experiment == "sparse") {
    result = cgof::run_sparse(spec);
  } else {
    cgof::fail(cgof::ErrorCode::BadArgument,
               "unknown experiment '" + args.experiment + "'");
  }

  std::filesystem::create_directories(args.out_dir);
  const std::string base = args.out_dir + "/" + args.experiment;
  cgof::write_rows_csv(base + "_results.csv", result.rows);
  cgof::write_summary_json(base + "_summary.json", spec, result);
  std::cout << "wrote " << base << "_results.csv (" << result.rows.size()
            << " rows) in " << result.runtime_seconds << "s\n";
  return 0;
}

int cmd_diagnose(const DiagArgs& args) {
  const cgof::Setting setting =
      args.setting == "sparse" ? cgof::Setting::Sparse : cgof::Setting::Logistic;
  const Eigen::VectorXd theta =
      cgof::make_theta_star(setting, args.d, args.theta_seed);
  const auto model = std::make_shared<cgof::LogisticGenerativeModel>(
      theta, args.null_model ? theta : Eigen::VectorXd(-theta));
  const auto procedure = cgof::make_procedure(parse_distinguisher(args.distinguisher));

  ordered_json j;
  j["check"] = args.check;
  j["seed"] = args.seed;
  if (args.check == "stability") {
    const cgof::StabilityReport rep = cgof::perturb_one_stability(
        *procedure, *model, args.n, args.reps, args.probes, args.seed);
    j["report"] = cgof::stability_to_json(rep, args.n);
    if (args.n4 > 0) {
      const cgof::StabilityReport rep4 = cgof::perturb_one_stability(
          *procedure, *model, args.n4, args.reps, args.probes, args.seed);
      j["report_n4"] = cgof::stability_to_json(rep4, args.n4);
      j["scaled_p99_ratio"] =
          rep4.scaled_p99 / (rep.scaled_p99 > 0 ? rep.scaled_p99 : 1e-300);
    }
  } else if (args.check == "hajek") {
    // one fitted fold evaluated on fresh data, oracle projections by MC
    const cgof::AugmentedDataset fit_data =
        cgof::sample_augmented(*model, args.n, cgof::derive_seed(args.seed, 1));
    std::vector<int> all(static_cast<std::size_t>(args.n));
    for (int i = 0; i < args.n; ++i) all[static_cast<std::size_t>(i)] = i;
    const auto g = procedure->fit(fit_data, all, cgof::derive_seed(args.seed, 2));
    const cgof::ScoreFn score = cgof::score_fn(g);

    const cgof::AugmentedDataset eval_data =
        cgof::sample_augmented(*model, args.n, cgof::derive_seed(args.seed, 3));
    const cgof::ScoredPair pair = cgof::score_records(
        eval_data, all, *g);
    const double fold_T = cgof::rank_sum(pair);
    std::vector<std::pair<std::vector<double>, int>> pts0, pts1;
    for (int i = 0; i < args.n; ++i) {
      const auto x = eval_data.x(i);
      pts0.emplace_back(std::vector<double>(x.begin(), x.end()), eval_data.y(i));
      pts1.emplace_back(std::vector<double>(x.begin(), x.end()), eval_data.y_prime(i));
    }
    const auto phi = cgof::population_projections(
        score, *model, pts0, cgof::ProjectionKind::Phi, args.draws,
        cgof::derive_seed(args.seed, 4));
    const auto psi = cgof::population_projections(
        score, *model, pts1, cgof::ProjectionKind::Psi, args.draws,
        cgof::derive_seed(args.seed, 5));
    const cgof::SeparationEstimate mu =
        cgof::auc_of(score, *model, args.draws, cgof::derive_seed(args.seed, 6));
    const cgof::HajekReport rep = cgof::hajek_residual(fold_T, phi, psi, mu.auc);
    j["report"] = {{"T", fold_T},
                   {"mu_hat", mu.auc},
                   {"residual", rep.residual},
                   {"scaled", rep.scaled}};
  } else if (args.check == "variance-oracle") {
    // split-kind estimator against the population variance of the same
    // fitted distinguisher
    const cgof::AugmentedDataset aug =
        cgof::sample_augmented(*model, 2 * args.n, cgof::derive_seed(args.seed, 1));
    std::vector<int> fit_half, eval_half;
    for (int i = 0; i < args.n; ++i) fit_half.push_back(i);
    for (int i = args.n; i < 2 * args.n; ++i) eval_half.push_back(i);
    const cgof::SplitStatistic stat = cgof::t_split(
        aug, fit_half, eval_half, *procedure, cgof::derive_seed(args.seed, 2));
    const cgof::ProjectionValues proj = cgof::empirical_projections(stat.pair);
    const cgof::VarianceEstimate est = cgof::sigma_split(proj, stat.T);
    const double oracle = cgof::population_variance_split(
        cgof::score_fn(stat.distinguisher), *model, 4000, args.draws,
        cgof::derive_seed(args.seed, 3));
    j["report"] = {{"sigma2_hat", est.sigma2_hat},
                   {"sigma2_oracle", oracle},
                   {"ratio", est.sigma2_hat / (oracle > 0 ? oracle : 1e-300)}};
  } else if (args.check == "sandwich") {
    const cgof::SandwichReport rep =
        cgof::check_tv_auc_sandwich(*model, args.draws, args.seed);
    j["report"] = {{"rho", rep.rho},
                   {"rho_tv", rep.rho_tv},
                   {"lower_margin", rep.lower_margin},
                   {"upper_margin", rep.upper_margin},
                   {"lower_slack", rep.lower_slack},
                   {"upper_slack", rep.upper_slack},
                   {"holds", rep.holds}};
  } else {
    cgof::fail(cgof::ErrorCode::BadArgument, "unknown check '" + args.check + "'");
  }
  write_json(args.out_path, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tolerance goodness-of-fit testing for probabilistic classifiers"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  TestArgs targs;
  CLI::App* test = app.add_subcommand("test", "run a test on CSV data + predictions");
  test->add_option("--data", targs.data_path, "holdout CSV (header x1..xd,y)")->required();
  test->add_option("--preds", targs.preds_path, "predictions CSV (header p0..p{M-1})")->required();
  test->add_option("--alpha", targs.alpha, "significance level");
  test->add_option("--delta", targs.delta, "tolerance radius");
  test->add_option("--method", targs.method, "split|cross");
  test->add_option("--k", targs.k, "fold count (cross)");
  test->add_option("--split-frac", targs.split_frac, "fitting fraction (split)");
  test->add_option("--distinguisher", targs.distinguisher, "logistic|lasso");
  test->add_option("--seed", targs.seed, "master seed");
  test->add_option("--out", targs.out_path, "report path (default stdout)");
  test->add_flag("--diagnostics", targs.diagnostics, "attach fold diagnostics");

  SimArgs sargs;
  CLI::App* sim = app.add_subcommand("simulate", "run a synthetic study");
  sim->add_option("--setting", sargs.setting, "logistic|sparse");
  sim->add_option("--experiment", sargs.experiment, "type1|power|sparse");
  sim->add_option("--n", sargs.n, "holdout size");
  sim->add_option("--d", sargs.d, "feature dimension");
  sim->add_option("--reps", sargs.reps, "replications");
  sim->add_option("--alphas", sargs.alphas, "alpha grid");
  sim->add_option("--delta-ratios", sargs.delta_ratios, "delta/delta* grid");
  sim->add_option("--method", sargs.method, "split|cross|both");
  sim->add_option("--k", sargs.k, "fold count");
  sim->add_option("--split-frac", sargs.split_frac, "fitting fraction");
  sim->add_option("--distinguisher", sargs.distinguisher, "logistic|lasso");
  sim->add_option("--seed", sargs.seed, "master seed");
  sim->add_option("--theta-seed", sargs.theta_seed, "theta* seed");
  sim->add_option("--oracle-draws", sargs.oracle_draws, "draws for delta*");
  sim->add_option("--out-dir", sargs.out_dir, "output directory");

  DiagArgs dargs;
  CLI::App* diag = app.add_subcommand("diagnose", "estimator diagnostics");
  diag->add_option("--check", dargs.check, "stability|hajek|variance-oracle|sandwich");
  diag->add_option("--n", dargs.n, "training size");
  diag->add_option("--n4", dargs.n4, "second training size for scaling (stability)");
  diag->add_option("--d", dargs.d, "feature dimension");
  diag->add_option("--reps", dargs.reps, "replications");
  diag->add_option("--probes", dargs.probes, "probe points per replication");
  diag->add_option("--draws", dargs.draws, "Monte Carlo draws");
  diag->add_option("--distinguisher", dargs.distinguisher, "logistic|lasso|constant");
  diag->add_option("--setting", dargs.setting, "logistic|sparse");
  diag->add_flag("--null-model", dargs.null_model, "use theta_hat = theta*");
  diag->add_option("--seed", dargs.seed, "master seed");
  diag->add_option("--theta-seed", dargs.theta_seed, "theta* seed");
  diag->add_option("--out", dargs.out_path, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  cgof::set_thread_count(threads);
  try {
    if (test->parsed()) return cmd_test(targs);
    if (sim->parsed()) return cmd_simulate(sargs);
    if (diag->parsed()) return cmd_diagnose(dargs);
  } catch (const cgof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_numeric() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
