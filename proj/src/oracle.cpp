#include "cgof/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cgof/parallel.hpp"

namespace cgof {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

constexpr std::uint64_t kHoldoutStream = 0x686f6c64ULL;
constexpr std::uint64_t kAugStream = 0x617567ULL;

// Fixed chunk grid so Monte Carlo results do not depend on the worker count.
constexpr long kChunks = 64;

struct MeanVar {
  double mean = 0.0;
  double se = 0.0;
};

/// Chunked parallel Monte Carlo mean of a per-draw value in [lo, hi].
MeanVar mc_mean(long draws, std::uint64_t seed,
                const std::function<double(Rng&)>& draw_value) {
  const long chunks = std::min<long>(kChunks, draws);
  std::vector<double> sums(static_cast<std::size_t>(chunks), 0.0);
  std::vector<double> sqs(static_cast<std::size_t>(chunks), 0.0);
  std::vector<long> counts(static_cast<std::size_t>(chunks), 0);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const long begin = static_cast<long>(c) * draws / chunks;
    const long end = (static_cast<long>(c) + 1) * draws / chunks;
    Rng rng(derive_seed(seed, 0xA0 + c));
    double s = 0.0, s2 = 0.0;
    for (long i = begin; i < end; ++i) {
      const double v = draw_value(rng);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sqs[c] = s2;
    counts[c] = end - begin;
  });
  double total = 0.0, total_sq = 0.0;
  long m = 0;
  for (std::size_t c = 0; c < sums.size(); ++c) {
    total += sums[c];
    total_sq += sqs[c];
    m += counts[c];
  }
  MeanVar out;
  out.mean = total / static_cast<double>(m);
  const double var =
      std::max(0.0, total_sq / static_cast<double>(m) - out.mean * out.mean);
  out.se = std::sqrt(var / static_cast<double>(m));
  return out;
}

}  // namespace

LogisticGenerativeModel::LogisticGenerativeModel(Eigen::VectorXd theta_star,
                                                 Eigen::VectorXd theta_hat)
    : theta_star_(std::move(theta_star)), theta_hat_(std::move(theta_hat)) {
  if (theta_star_.size() != theta_hat_.size() || theta_star_.size() < 1) {
    fail(ErrorCode::BadArgument, "logistic model: mismatched coefficient lengths");
  }
}

void LogisticGenerativeModel::sample_x(Rng& rng, std::span<double> out) const {
  rng.fill_normal(out);
}

SimplexVector LogisticGenerativeModel::eta(std::span<const double> x) const {
  double t = 0.0;
  for (Eigen::Index j = 0; j < theta_star_.size(); ++j) {
    t += theta_star_[j] * x[static_cast<std::size_t>(j)];
  }
  const double p1 = sigmoid(t);
  return SimplexVector{{1.0 - p1, p1}};
}

SimplexVector LogisticGenerativeModel::eta_hat(std::span<const double> x) const {
  double t = 0.0;
  for (Eigen::Index j = 0; j < theta_hat_.size(); ++j) {
    t += theta_hat_[j] * x[static_cast<std::size_t>(j)];
  }
  const double p1 = sigmoid(t);
  return SimplexVector{{1.0 - p1, p1}};
}

DiscreteGenerativeModel::DiscreteGenerativeModel(
    std::vector<double> point_probs, std::vector<SimplexVector> eta_table,
    std::vector<SimplexVector> eta_hat_table)
    : point_probs_(std::move(point_probs)), eta_table_(std::move(eta_table)),
      eta_hat_table_(std::move(eta_hat_table)) {
  if (point_probs_.empty() || eta_table_.size() != point_probs_.size() ||
      eta_hat_table_.size() != point_probs_.size()) {
    fail(ErrorCode::BadArgument, "discrete model: table sizes disagree");
  }
}

void DiscreteGenerativeModel::sample_x(Rng& rng, std::span<double> out) const {
  out[0] = static_cast<double>(rng.categorical(point_probs_));
}

SimplexVector DiscreteGenerativeModel::eta(std::span<const double> x) const {
  const int s = static_cast<int>(std::lround(x[0]));
  return eta_table_[static_cast<std::size_t>(s)];
}

SimplexVector DiscreteGenerativeModel::eta_hat(std::span<const double> x) const {
  const int s = static_cast<int>(std::lround(x[0]));
  return eta_hat_table_[static_cast<std::size_t>(s)];
}

std::shared_ptr<const HoldoutDataset> sample_holdout(const GenerativeModel& model,
                                                     int n, std::uint64_t seed) {
  const int d = model.dim();
  RowMatrix features(n, d);
  std::vector<int> labels(static_cast<std::size_t>(n));
  Rng rng(derive_seed(seed, kHoldoutStream));
  for (int i = 0; i < n; ++i) {
    std::span<double> row(features.row(i).data(), static_cast<std::size_t>(d));
    model.sample_x(rng, row);
    labels[static_cast<std::size_t>(i)] = rng.categorical(model.eta(row).span());
  }
  return std::make_shared<HoldoutDataset>(std::move(features), std::move(labels),
                                          model.label_count());
}

AugmentedDataset sample_augmented(const GenerativeModel& model, int n,
                                  std::uint64_t seed) {
  auto holdout = sample_holdout(model, n, seed);
  // non-owning: the classifier only lives for the augmentation call
  const ModelClassifier classifier(
      std::shared_ptr<const GenerativeModel>(&model, [](const GenerativeModel*) {}));
  return augment(std::move(holdout), classifier, derive_seed(seed, kAugStream));
}

double likelihood_ratio(const GenerativeModel& model, std::span<const double> x, int y) {
  const double p0 = model.eta(x)[y];
  const double p1 = model.eta_hat(x)[y];
  if (p0 <= 0.0) {
    return p1 <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return p1 / p0;
}

namespace {

struct Draw {
  std::vector<double> x;
  int y = 0;
};

void draw_p0(const GenerativeModel& model, Rng& rng, Draw& out) {
  model.sample_x(rng, out.x);
  out.y = rng.categorical(model.eta(out.x).span());
}

void draw_p1(const GenerativeModel& model, Rng& rng, Draw& out) {
  model.sample_x(rng, out.x);
  out.y = rng.categorical(model.eta_hat(out.x).span());
}

}  // namespace

SeparationEstimate auc_of(const ScoreFn& score, const GenerativeModel& model,
                          long draws, std::uint64_t seed) {
  if (draws < 2) fail(ErrorCode::BadArgument, "auc_of: need at least two draws");
  const int d = model.dim();
  const MeanVar mv = mc_mean(draws, seed, [&](Rng& rng) {
    thread_local Draw z, zp;
    z.x.resize(static_cast<std::size_t>(d));
    zp.x.resize(static_cast<std::size_t>(d));
    draw_p0(model, rng, z);
    draw_p1(model, rng, zp);
    const double a = score(z.x, z.y);
    const double b = score(zp.x, zp.y);
    if (a < b) return 1.0;
    if (a == b) return 0.5;
    return 0.0;
  });
  SeparationEstimate out;
  out.auc = mv.mean;
  out.rho = mv.mean - 0.5;
  out.mc_se = mv.se;
  out.draws = draws;
  return out;
}

SeparationEstimate separation(const GenerativeModel& model, long draws,
                              std::uint64_t seed) {
  return auc_of([&](std::span<const double> x, int y) {
    return likelihood_ratio(model, x, y);
  }, model, draws, seed);
}

double tv_distance(const GenerativeModel& model, long draws, std::uint64_t seed) {
  if (draws < 1) fail(ErrorCode::BadArgument, "tv_distance: need at least one draw");
  const int d = model.dim();
  const MeanVar mv = mc_mean(draws, derive_seed(seed, 0x7476ULL), [&](Rng& rng) {
    thread_local std::vector<double> x;
    x.resize(static_cast<std::size_t>(d));
    model.sample_x(rng, x);
    const SimplexVector a = model.eta(x);
    const SimplexVector b = model.eta_hat(x);
    double half_l1 = 0.0;
    for (int k = 0; k < a.size(); ++k) half_l1 += std::abs(a[k] - b[k]);
    return 0.5 * half_l1;
  });
  return mv.mean;
}

SandwichReport check_tv_auc_sandwich(const GenerativeModel& model, long draws,
                                     std::uint64_t seed) {
  const SeparationEstimate sep = separation(model, draws, seed);

  const int d = model.dim();
  const MeanVar tv = mc_mean(draws, derive_seed(seed, 0x7476ULL), [&](Rng& rng) {
    thread_local std::vector<double> x;
    x.resize(static_cast<std::size_t>(d));
    model.sample_x(rng, x);
    const SimplexVector a = model.eta(x);
    const SimplexVector b = model.eta_hat(x);
    double half_l1 = 0.0;
    for (int k = 0; k < a.size(); ++k) half_l1 += std::abs(a[k] - b[k]);
    return 0.5 * half_l1;
  });

  SandwichReport out;
  out.rho = sep.rho;
  out.rho_tv = tv.mean;
  out.lower_margin = sep.rho - tv.mean / 4.0;
  out.upper_margin = tv.mean / 2.0 - sep.rho;
  out.lower_slack = 3.0 * (sep.mc_se + tv.se / 4.0);
  out.upper_slack = 3.0 * (sep.mc_se + tv.se / 2.0);
  out.holds = out.lower_margin >= -out.lower_slack && out.upper_margin >= -out.upper_slack;
  return out;
}

namespace {

/// Sorted Monte Carlo score pool under P0 or P1.
std::vector<double> score_pool(const ScoreFn& score, const GenerativeModel& model,
                               bool from_p1, long draws, std::uint64_t seed) {
  std::vector<double> pool(static_cast<std::size_t>(draws));
  const int d = model.dim();
  const long chunks = std::min<long>(kChunks, draws);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const long begin = static_cast<long>(c) * draws / chunks;
    const long end = (static_cast<long>(c) + 1) * draws / chunks;
    Rng rng(derive_seed(seed, 0xB0 + c));
    Draw z;
    z.x.resize(static_cast<std::size_t>(d));
    for (long i = begin; i < end; ++i) {
      if (from_p1) {
        draw_p1(model, rng, z);
      } else {
        draw_p0(model, rng, z);
      }
      pool[static_cast<std::size_t>(i)] = score(z.x, z.y);
    }
  });
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// P(pool value beats s) for phi, P(pool value loses to s) for psi; ties half.
double pool_fraction(const std::vector<double>& sorted_pool, double s, bool above) {
  const auto lo = std::lower_bound(sorted_pool.begin(), sorted_pool.end(), s);
  const auto hi = std::upper_bound(lo, sorted_pool.end(), s);
  const double ties = static_cast<double>(hi - lo);
  const double n = static_cast<double>(sorted_pool.size());
  if (above) {
    return (static_cast<double>(sorted_pool.end() - hi) + 0.5 * ties) / n;
  }
  return (static_cast<double>(lo - sorted_pool.begin()) + 0.5 * ties) / n;
}

}  // namespace

std::vector<double> population_projections(
    const ScoreFn& score, const GenerativeModel& model,
    std::span<const std::pair<std::vector<double>, int>> points, ProjectionKind kind,
    long draws, std::uint64_t seed) {
  if (draws < 1) fail(ErrorCode::BadArgument, "population_projections: need draws >= 1");
  const bool phi = kind == ProjectionKind::Phi;
  const std::vector<double> pool =
      score_pool(score, model, /*from_p1=*/phi, draws, seed);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double s = score(points[i].first, points[i].second);
    out[i] = pool_fraction(pool, s, /*above=*/phi);
  }
  return out;
}

double population_variance_split(const ScoreFn& score, const GenerativeModel& model,
                                 long outer, long proj_draws, std::uint64_t seed) {
  if (outer < 2) fail(ErrorCode::BadArgument, "population_variance_split: outer >= 2");
  const std::vector<double> pool1 =
      score_pool(score, model, true, proj_draws, derive_seed(seed, 1));
  const std::vector<double> pool0 =
      score_pool(score, model, false, proj_draws, derive_seed(seed, 2));

  const int d = model.dim();
  const MeanVar mv = mc_mean(outer, derive_seed(seed, 3), [&](Rng& rng) {
    thread_local std::vector<double> x;
    x.resize(static_cast<std::size_t>(d));
    model.sample_x(rng, x);
    const int y = rng.categorical(model.eta(x).span());
    const int y_prime = rng.categorical(model.eta_hat(x).span());
    const double phi = pool_fraction(pool1, score(x, y), true);
    const double psi = pool_fraction(pool0, score(x, y_prime), false);
    return phi + psi;
  });
  // sample variance with divisor outer - 1
  const double var_n = mv.se * mv.se * static_cast<double>(outer);
  return var_n * static_cast<double>(outer) / static_cast<double>(outer - 1);
}

double population_variance_cross(const DistinguisherProcedure& procedure,
                                 const GenerativeModel& model, int n_train, long outer,
                                 int inner, long proj_draws, std::uint64_t seed) {
  if (outer < 2 || inner < 1) {
    fail(ErrorCode::BadArgument, "population_variance_cross: need outer >= 2, inner >= 1");
  }
  const int d = model.dim();

  // Fixed outer triplets (X, Y, Y') with shared X.
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(outer));
  std::vector<int> ys(static_cast<std::size_t>(outer));
  std::vector<int> yps(static_cast<std::size_t>(outer));
  {
    Rng rng(derive_seed(seed, 0x7472ULL));
    for (long i = 0; i < outer; ++i) {
      auto& x = xs[static_cast<std::size_t>(i)];
      x.resize(static_cast<std::size_t>(d));
      model.sample_x(rng, x);
      ys[static_cast<std::size_t>(i)] = rng.categorical(model.eta(x).span());
      yps[static_cast<std::size_t>(i)] = rng.categorical(model.eta_hat(x).span());
    }
  }

  std::vector<double> sums(static_cast<std::size_t>(outer), 0.0);
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(inner));
  parallel_for(static_cast<std::size_t>(inner), [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(seed, 0x1000 + r);
    const AugmentedDataset train = sample_augmented(model, n_train, rep_seed);
    std::vector<int> all(static_cast<std::size_t>(n_train));
    for (int i = 0; i < n_train; ++i) all[static_cast<std::size_t>(i)] = i;
    const auto g = procedure.fit(train, all, derive_seed(rep_seed, 9));
    const ScoreFn score = score_fn(g);
    const std::vector<double> pool1 =
        score_pool(score, model, true, proj_draws, derive_seed(rep_seed, 11));
    const std::vector<double> pool0 =
        score_pool(score, model, false, proj_draws, derive_seed(rep_seed, 12));
    auto& acc = partial[r];
    acc.resize(static_cast<std::size_t>(outer));
    for (long i = 0; i < outer; ++i) {
      const auto& x = xs[static_cast<std::size_t>(i)];
      const double phi = pool_fraction(pool1, score(x, ys[static_cast<std::size_t>(i)]), true);
      const double psi = pool_fraction(pool0, score(x, yps[static_cast<std::size_t>(i)]), false);
      acc[static_cast<std::size_t>(i)] = phi + psi;
    }
  });
  for (const auto& acc : partial) {
    for (long i = 0; i < outer; ++i) sums[static_cast<std::size_t>(i)] += acc[static_cast<std::size_t>(i)];
  }

  double mean = 0.0;
  for (double& s : sums) {
    s /= static_cast<double>(inner);
    mean += s;
  }
  mean /= static_cast<double>(outer);
  double var = 0.0;
  for (const double s : sums) var += (s - mean) * (s - mean);
  return var / static_cast<double>(outer - 1);
}

ScoreFn score_fn(std::shared_ptr<const Distinguisher> g) {
  return [g = std::move(g)](std::span<const double> x, int y) { return g->score(x, y); };
}

ScoreFn likelihood_ratio_fn(std::shared_ptr<const GenerativeModel> model) {
  return [model = std::move(model)](std::span<const double> x, int y) {
    return likelihood_ratio(*model, x, y);
  };
}

}  // namespace cgof
