#include "cgof/distinguish.hpp"

#include "cgof/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cgof {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// log(1 + exp(t)) without overflow
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

ExpandedSample expand(const AugmentedDataset& aug, std::span<const int> indices) {
  if (indices.empty()) fail(ErrorCode::EmptySubset, "expand: empty record subset");
  ExpandedSample out;
  out.aug = &aug;
  out.rows.reserve(indices.size() * 2);
  for (const int i : indices) out.rows.push_back({i, aug.y(i), 0});
  for (const int i : indices) out.rows.push_back({i, aug.y_prime(i), 1});
  return out;
}

double LogisticModel::score(std::span<const double> x) const {
  const int d = static_cast<int>(theta.size()) - 1;
  double t = theta[d];
  for (int j = 0; j < d; ++j) t += theta[j] * x[static_cast<std::size_t>(j)];
  return sigmoid(t);
}

LogisticModel fit_logistic(const RowMatrix& xs, std::span<const int> cs,
                           const IrlsOptions& opts) {
  const Eigen::Index m = xs.rows();
  const Eigen::Index d = xs.cols();
  if (static_cast<Eigen::Index>(cs.size()) != m) {
    fail(ErrorCode::BadArgument, "fit_logistic: row/label count mismatch");
  }
  if (!xs.allFinite()) fail(ErrorCode::BadArgument, "fit_logistic: non-finite features");
  int ones = 0;
  for (const int c : cs) ones += (c != 0);
  if (ones == 0 || ones == static_cast<int>(m)) {
    fail(ErrorCode::SingleClassInput, "fit_logistic: labels are all one class");
  }

  Eigen::MatrixXd xa(m, d + 1);
  xa.leftCols(d) = xs;
  xa.col(d).setOnes();
  Eigen::VectorXd c(m);
  for (Eigen::Index i = 0; i < m; ++i) c[i] = cs[static_cast<std::size_t>(i)] ? 1.0 : 0.0;

  const auto nll = [&](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd eta = xa * theta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) total += softplus(eta[i]) - c[i] * eta[i];
    return total;
  };

  LogisticModel model;
  model.theta = Eigen::VectorXd::Zero(d + 1);
  double objective = nll(model.theta);
  bool clipped_before = false;

  for (int it = 0; it < opts.max_iter; ++it) {
    model.iterations = it + 1;
    const Eigen::VectorXd eta = xa * model.theta;
    Eigen::VectorXd p(m), w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      p[i] = sigmoid(eta[i]);
      w[i] = p[i] * (1.0 - p[i]);
    }
    const Eigen::MatrixXd xw = xa.array().colwise() * w.array();
    Eigen::MatrixXd hess = xa.transpose() * xw;
    hess.diagonal().array() += 1e-10;
    const Eigen::VectorXd grad = xa.transpose() * (c - p);
    Eigen::VectorXd step = hess.ldlt().solve(grad);

    // halve the raw Newton step until the objective stops increasing
    Eigen::VectorXd theta_new;
    double obj_new = 0.0;
    bool accepted = false;
    for (int half = 0; half < 12; ++half) {
      theta_new = model.theta + step;
      obj_new = nll(theta_new);
      if (obj_new <= objective + 1e-12 * (1.0 + std::abs(objective))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      fail(ErrorCode::NumericalFailure,
           "fit_logistic: objective increased after jittered step at iteration " +
               std::to_string(it + 1));
    }

    // separation guard; the projection itself may raise the objective
    bool clipped = false;
    const double norm = theta_new.norm();
    if (norm > opts.clip_norm) {
      theta_new *= opts.clip_norm / norm;
      obj_new = nll(theta_new);
      clipped = true;
    }

    const double max_update = (theta_new - model.theta).cwiseAbs().maxCoeff();
    model.theta = theta_new;
    objective = obj_new;
    if (max_update < opts.tol) {
      model.converged = !clipped;
      return model;
    }
    if (clipped && clipped_before) {
      model.converged = false;  // separation: the fit keeps pushing outward
      return model;
    }
    clipped_before = clipped;
  }
  model.converged = false;
  return model;
}

LabelFeatureBasis::LabelFeatureBasis(int label_count, int dim, double bound)
    : label_count_(label_count), dim_(dim), bound_(bound) {
  if (label_count < 2 || dim < 1 || bound < 1.0) {
    fail(ErrorCode::BadArgument, "LabelFeatureBasis: need M >= 2, d >= 1, B >= 1");
  }
}

void LabelFeatureBasis::eval(std::span<const double> x, int y,
                             std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (y < 0 || y >= label_count_) return;  // unseen label scores as all-zero
  const std::size_t base = static_cast<std::size_t>(y) * (dim_ + 1);
  for (int j = 0; j < dim_; ++j) {
    out[base + static_cast<std::size_t>(j)] =
        std::clamp(x[static_cast<std::size_t>(j)], -bound_, bound_);
  }
  out[base + static_cast<std::size_t>(dim_)] = 1.0;
}

DesignMatrix build_design_matrix(const ExpandedSample& sample,
                                 const BasisExpansion& basis) {
  const int rows = static_cast<int>(sample.rows.size());
  const int k = basis.size();
  const double bound = basis.bound();
  DesignMatrix out;
  out.xi.resize(rows, k);
  out.z.resize(rows);
  std::vector<double> buf(static_cast<std::size_t>(k));
  for (int r = 0; r < rows; ++r) {
    const ExpandedRow& row = sample.rows[static_cast<std::size_t>(r)];
    basis.eval(sample.x(r), row.y, buf);
    for (int j = 0; j < k; ++j) {
      const double v = buf[static_cast<std::size_t>(j)];
      if (!std::isfinite(v) || std::abs(v) > bound + 1e-12) {
        fail(ErrorCode::UnboundedBasis,
             "basis function " + std::to_string(j) + " evaluates to " +
                 std::to_string(v) + " beyond bound " + std::to_string(bound));
      }
      out.xi(r, j) = v;
    }
    out.z[r] = row.cls;
  }
  return out;
}

LassoModel fit_lasso(const Eigen::MatrixXd& design, const Eigen::VectorXd& z,
                     double lambda, const LassoOptions& opts) {
  if (lambda <= 0.0) {
    fail(ErrorCode::NonPositiveLambda, "fit_lasso: lambda must be positive");
  }
  if (!design.allFinite()) fail(ErrorCode::BadArgument, "fit_lasso: non-finite design");
  if (design.rows() != z.size() || design.rows() < 2) {
    fail(ErrorCode::BadArgument, "fit_lasso: bad design/response shape");
  }
  const Eigen::Index rows = design.rows();
  const Eigen::Index k = design.cols();
  const double n = static_cast<double>(rows) / 2.0;
  const double inv2n = 1.0 / (2.0 * n);

  LassoModel model;
  model.lambda = lambda;
  model.beta = Eigen::VectorXd::Zero(k);

  // a_j = ||xi_j||^2 / (2n): curvature of the smooth part per coordinate
  Eigen::VectorXd curvature(k);
  for (Eigen::Index j = 0; j < k; ++j) curvature[j] = design.col(j).squaredNorm() * inv2n;

  Eigen::VectorXd residual = z;  // z - xi * beta
  const auto objective = [&] {
    return residual.squaredNorm() / (4.0 * n) + lambda * model.beta.lpNorm<1>();
  };

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    model.sweeps = sweep + 1;
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (curvature[j] < 1e-300) continue;  // all-zero column stays at zero
      const double beta_old = model.beta[j];
      const double rho = design.col(j).dot(residual) * inv2n + curvature[j] * beta_old;
      double beta_new = 0.0;
      if (rho > lambda) {
        beta_new = (rho - lambda) / curvature[j];
      } else if (rho < -lambda) {
        beta_new = (rho + lambda) / curvature[j];
      }
      const double change = beta_new - beta_old;
      if (change != 0.0) {
        residual -= design.col(j) * change;
        model.beta[j] = beta_new;
      }
      max_change = std::max(max_change, std::abs(change));
    }
    model.objective_trace.push_back(objective());
    if (max_change < opts.tol) {
      model.converged = true;
      return model;
    }
  }
  model.converged = false;  // max sweeps exhausted, best iterate returned
  return model;
}

double default_lambda(int basis_size, int n, double c) {
  if (basis_size < 2 || n < 1 || c <= 0.0) {
    fail(ErrorCode::BadArgument, "default_lambda: need K_n >= 2, n >= 1, c > 0");
  }
  return c * std::sqrt(std::log(static_cast<double>(basis_size)) / n);
}

// ---------------------------------------------------------------------------

namespace {

class LogisticScorer : public BinaryScorer {
 public:
  explicit LogisticScorer(LogisticModel model) : model_(std::move(model)) {}
  double score(std::span<const double> x) const override { return model_.score(x); }

 private:
  LogisticModel model_;
};

class LabelSplitDistinguisher : public Distinguisher {
 public:
  explicit LabelSplitDistinguisher(std::vector<std::shared_ptr<const BinaryScorer>> per_label)
      : per_label_(std::move(per_label)) {}

  double score(std::span<const double> x, int y) const override {
    if (y < 0 || y >= static_cast<int>(per_label_.size()) ||
        per_label_[static_cast<std::size_t>(y)] == nullptr) {
      return 0.5;
    }
    return clamp01(per_label_[static_cast<std::size_t>(y)]->score(x));
  }

 private:
  std::vector<std::shared_ptr<const BinaryScorer>> per_label_;
};

class LassoDistinguisher : public Distinguisher {
 public:
  LassoDistinguisher(LassoModel model, std::shared_ptr<const BasisExpansion> basis)
      : model_(std::move(model)), basis_(std::move(basis)) {}

  double score(std::span<const double> x, int y) const override {
    thread_local std::vector<double> buf;
    buf.resize(static_cast<std::size_t>(basis_->size()));
    basis_->eval(x, y, buf);
    double v = 0.0;
    for (Eigen::Index j = 0; j < model_.beta.size(); ++j) {
      v += model_.beta[j] * buf[static_cast<std::size_t>(j)];
    }
    return clamp01(v);
  }

  const LassoModel& model() const { return model_; }

 private:
  LassoModel model_;
  std::shared_ptr<const BasisExpansion> basis_;
};

class ConstantDistinguisher : public Distinguisher {
 public:
  explicit ConstantDistinguisher(double value) : value_(value) {}
  double score(std::span<const double>, int) const override { return value_; }

 private:
  double value_;
};

}  // namespace

std::shared_ptr<const BinaryScorer> IrlsLogisticInner::fit(const RowMatrix& xs,
                                                           std::span<const int> cs,
                                                           std::uint64_t) const {
  return std::make_shared<LogisticScorer>(fit_logistic(xs, cs, opts_));
}

std::shared_ptr<const Distinguisher> label_split_fit(
    const AugmentedDataset& aug, std::span<const int> indices,
    const BinaryClassifierProcedure& inner, std::uint64_t seed) {
  const ExpandedSample sample = expand(aug, indices);
  const int label_count = aug.label_count();
  const int dim = aug.dim();

  std::vector<std::shared_ptr<const BinaryScorer>> per_label(
      static_cast<std::size_t>(label_count));
  for (int lab = 0; lab < label_count; ++lab) {
    std::vector<int> row_ids;
    for (std::size_t r = 0; r < sample.rows.size(); ++r) {
      if (sample.rows[r].y == lab) row_ids.push_back(static_cast<int>(r));
    }
    if (row_ids.empty()) continue;
    bool has0 = false, has1 = false;
    for (const int r : row_ids) {
      (sample.rows[static_cast<std::size_t>(r)].cls ? has1 : has0) = true;
    }
    if (!has0 || !has1) continue;  // constant 0.5 fallback for this stratum

    RowMatrix xs(static_cast<Eigen::Index>(row_ids.size()), dim);
    std::vector<int> cs(row_ids.size());
    for (std::size_t t = 0; t < row_ids.size(); ++t) {
      const auto x = sample.x(row_ids[t]);
      for (int j = 0; j < dim; ++j) xs(static_cast<Eigen::Index>(t), j) = x[static_cast<std::size_t>(j)];
      cs[t] = sample.rows[static_cast<std::size_t>(row_ids[t])].cls;
    }
    per_label[static_cast<std::size_t>(lab)] =
        inner.fit(xs, cs, derive_seed(seed, static_cast<std::uint64_t>(lab)));
  }
  return std::make_shared<LabelSplitDistinguisher>(std::move(per_label));
}

std::shared_ptr<const Distinguisher> LogisticSplitProcedure::fit(
    const AugmentedDataset& aug, std::span<const int> indices,
    std::uint64_t seed) const {
  return label_split_fit(aug, indices, inner_, seed);
}

std::shared_ptr<const Distinguisher> LassoDistinguisherProcedure::fit(
    const AugmentedDataset& aug, std::span<const int> indices,
    std::uint64_t) const {
  const ExpandedSample sample = expand(aug, indices);
  auto basis = std::make_shared<LabelFeatureBasis>(aug.label_count(), aug.dim(),
                                                   config_.basis_bound);
  const DesignMatrix design = build_design_matrix(sample, *basis);
  const double lambda =
      config_.lambda_override.value_or(default_lambda(
          basis->size(), static_cast<int>(indices.size()), config_.lambda_scale));
  LassoModel model = fit_lasso(design.xi, design.z, lambda, config_.solver);
  model.basis = basis;
  return std::make_shared<LassoDistinguisher>(std::move(model), std::move(basis));
}

std::shared_ptr<const Distinguisher> ConstantProcedure::fit(const AugmentedDataset&,
                                                            std::span<const int>,
                                                            std::uint64_t) const {
  return std::make_shared<ConstantDistinguisher>(value_);
}

}  // namespace cgof
