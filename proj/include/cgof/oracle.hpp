#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cgof/data.hpp"
#include "cgof/distinguish.hpp"
#include "cgof/rng.hpp"

namespace cgof {

/// Known data-generating process: feature law P_X, true conditional eta,
/// and the classifier under test eta_hat. Ground truth for the Monte Carlo
/// oracles that validate the estimators.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;
  virtual int dim() const = 0;
  virtual int label_count() const = 0;
  virtual void sample_x(Rng& rng, std::span<double> out) const = 0;
  virtual SimplexVector eta(std::span<const double> x) const = 0;
  virtual SimplexVector eta_hat(std::span<const double> x) const = 0;
};

/// Binary logistic pair: eta = sigmoid(x' theta_star), eta_hat with
/// theta_hat, X ~ N(0, I_d). The simulation settings live here.
class LogisticGenerativeModel : public GenerativeModel {
 public:
  LogisticGenerativeModel(Eigen::VectorXd theta_star, Eigen::VectorXd theta_hat);
  int dim() const override { return static_cast<int>(theta_star_.size()); }
  int label_count() const override { return 2; }
  void sample_x(Rng& rng, std::span<double> out) const override;
  SimplexVector eta(std::span<const double> x) const override;
  SimplexVector eta_hat(std::span<const double> x) const override;

  const Eigen::VectorXd& theta_star() const { return theta_star_; }
  const Eigen::VectorXd& theta_hat() const { return theta_hat_; }

 private:
  Eigen::VectorXd theta_star_;
  Eigen::VectorXd theta_hat_;
};

/// Finite-support model on points {0, .., S-1} embedded as a single feature;
/// exact enumeration oracles in the tests pair with this.
class DiscreteGenerativeModel : public GenerativeModel {
 public:
  DiscreteGenerativeModel(std::vector<double> point_probs,
                          std::vector<SimplexVector> eta_table,
                          std::vector<SimplexVector> eta_hat_table);
  int dim() const override { return 1; }
  int label_count() const override { return eta_table_[0].size(); }
  void sample_x(Rng& rng, std::span<double> out) const override;
  SimplexVector eta(std::span<const double> x) const override;
  SimplexVector eta_hat(std::span<const double> x) const override;

  int support_size() const { return static_cast<int>(point_probs_.size()); }
  double point_prob(int s) const { return point_probs_[static_cast<std::size_t>(s)]; }

 private:
  std::vector<double> point_probs_;
  std::vector<SimplexVector> eta_table_;
  std::vector<SimplexVector> eta_hat_table_;
};

/// eta_hat of a generative model exposed through the black-box interface.
class ModelClassifier : public ProbabilisticClassifier {
 public:
  explicit ModelClassifier(std::shared_ptr<const GenerativeModel> model)
      : model_(std::move(model)) {}
  int label_count() const override { return model_->label_count(); }
  SimplexVector predict(std::span<const double> x) const override {
    return model_->eta_hat(x);
  }

 private:
  std::shared_ptr<const GenerativeModel> model_;
};

/// Draws a holdout sample (X_i, Y_i ~ eta(X_i)) of size n.
std::shared_ptr<const HoldoutDataset> sample_holdout(const GenerativeModel& model,
                                                     int n, std::uint64_t seed);

/// Holdout draw plus second-sample augmentation in one step.
AugmentedDataset sample_augmented(const GenerativeModel& model, int n,
                                  std::uint64_t seed);

/// Any scoring rule (x, y) -> real; distinguishers and likelihood ratios both fit.
using ScoreFn = std::function<double(std::span<const double>, int)>;

/// True likelihood ratio dP1/dP0 at (x, y): eta_hat_y(x) / eta_y(x).
/// 0/0 -> 1 (outside both supports); c/0 -> +infinity sentinel.
double likelihood_ratio(const GenerativeModel& model, std::span<const double> x, int y);

struct SeparationEstimate {
  double rho = 0.0;   // auc - 0.5
  double auc = 0.5;
  double mc_se = 0.0;
  long draws = 0;
};

/// Monte Carlo AUC of a score under (Z, Z') ~ P0 x P1 with ties counted
/// half, matching the expectation of the randomized tie-break.
SeparationEstimate auc_of(const ScoreFn& score, const GenerativeModel& model,
                          long draws, std::uint64_t seed);

/// Separation of the model itself: AUC of the true likelihood ratio.
SeparationEstimate separation(const GenerativeModel& model, long draws,
                              std::uint64_t seed);

/// Monte Carlo E_X[ (1/2) sum_l |eta_l - eta_hat_l| ].
double tv_distance(const GenerativeModel& model, long draws, std::uint64_t seed);

struct SandwichReport {
  double rho = 0.0;
  double rho_tv = 0.0;
  double lower_margin = 0.0;  // rho - rho_tv / 4
  double upper_margin = 0.0;  // rho_tv / 2 - rho
  double lower_slack = 0.0;   // 3 MC standard errors
  double upper_slack = 0.0;
  bool holds = false;
};

/// Checks rho_tv/4 <= rho <= rho_tv/2 with 3-MC-SE slack on both sides.
SandwichReport check_tv_auc_sandwich(const GenerativeModel& model, long draws,
                                     std::uint64_t seed);

enum class ProjectionKind { Phi, Psi };

/// Population projections of a score at given points: phi(x,y) is the
/// probability a fresh P1 draw outscores (x,y) (ties half); psi mirrors
/// over P0. One shared Monte Carlo pool of `draws` scores.
std::vector<double> population_projections(
    const ScoreFn& score, const GenerativeModel& model,
    std::span<const std::pair<std::vector<double>, int>> points, ProjectionKind kind,
    long draws, std::uint64_t seed);

/// Population variance of phi + psi over iid triplets (X, Y, Y') for a fixed
/// fitted distinguisher (the sample-split variance).
double population_variance_split(const ScoreFn& score, const GenerativeModel& model,
                                 long outer, long proj_draws, std::uint64_t seed);

/// Cross-fit population variance: variance over triplets of the average,
/// across `inner` refitted training sets of size n_train, of phi + psi.
double population_variance_cross(const DistinguisherProcedure& procedure,
                                 const GenerativeModel& model, int n_train, long outer,
                                 int inner, long proj_draws, std::uint64_t seed);

ScoreFn score_fn(std::shared_ptr<const Distinguisher> g);
ScoreFn likelihood_ratio_fn(std::shared_ptr<const GenerativeModel> model);

}  // namespace cgof
