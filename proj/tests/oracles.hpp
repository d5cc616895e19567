// Test-only oracles, kept independent of the library's fast paths:
// the O(m^2) rank-sum double loop and exact enumeration over discrete
// generative models.
#pragma once

#include <cmath>
#include <vector>

#include "cgof/oracle.hpp"
#include "cgof/ranksum.hpp"

namespace cgof::testoracle {

// Literal transcription of the tie-broken rank indicator:
//   R~_ij = 1(s0_i < s1_j) + 1(u0_i < u1_j) 1(s0_i = s1_j)
inline double brute_rank_sum(const ScoredPair& p, bool tie_break) {
  const std::size_t m = p.s0.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (p.s0[i] < p.s1[j]) {
        acc += 1.0;
      } else if (tie_break && p.s0[i] == p.s1[j] && p.u0[i] < p.u1[j]) {
        acc += 1.0;
      }
    }
  }
  return acc / (static_cast<double>(m) * static_cast<double>(m));
}

inline ProjectionValues brute_projections(const ScoredPair& p, bool tie_break) {
  const std::size_t m = p.s0.size();
  ProjectionValues out;
  out.phi_hat.assign(m, 0.0);
  out.psi_hat.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const bool lt = p.s0[i] < p.s1[j] ||
                      (tie_break && p.s0[i] == p.s1[j] && p.u0[i] < p.u1[j]);
      if (lt) {
        out.phi_hat[i] += 1.0;
        out.psi_hat[j] += 1.0;
      }
    }
  }
  for (double& v : out.phi_hat) v /= static_cast<double>(m);
  for (double& v : out.psi_hat) v /= static_cast<double>(m);
  return out;
}

// Atom (x = support point s, y = label) of a discrete model with its mass
// under P0 and P1.
struct Atom {
  int s = 0;
  int y = 0;
  double p0 = 0.0;
  double p1 = 0.0;
};

inline std::vector<Atom> enumerate_atoms(const DiscreteGenerativeModel& model) {
  std::vector<Atom> atoms;
  for (int s = 0; s < model.support_size(); ++s) {
    const double x = static_cast<double>(s);
    const SimplexVector e = model.eta({&x, 1});
    const SimplexVector h = model.eta_hat({&x, 1});
    for (int y = 0; y < model.label_count(); ++y) {
      atoms.push_back({s, y, model.point_prob(s) * e[y], model.point_prob(s) * h[y]});
    }
  }
  return atoms;
}

// Exact tie-split AUC of an arbitrary score over (Z, Z') ~ P0 x P1.
inline double enumerate_auc(const DiscreteGenerativeModel& model, const ScoreFn& score) {
  const std::vector<Atom> atoms = enumerate_atoms(model);
  double acc = 0.0;
  for (const Atom& a : atoms) {
    const double xa = static_cast<double>(a.s);
    const double sa = score({&xa, 1}, a.y);
    for (const Atom& b : atoms) {
      const double xb = static_cast<double>(b.s);
      const double sb = score({&xb, 1}, b.y);
      if (sa < sb) {
        acc += a.p0 * b.p1;
      } else if (sa == sb) {
        acc += 0.5 * a.p0 * b.p1;
      }
    }
  }
  return acc;
}

inline double enumerate_tv(const DiscreteGenerativeModel& model) {
  double acc = 0.0;
  for (const Atom& a : enumerate_atoms(model)) acc += std::abs(a.p1 - a.p0);
  return 0.5 * acc;
}

// E_{P0} |f|, exact.
inline double enumerate_l1_p0(const DiscreteGenerativeModel& model, const ScoreFn& f) {
  double acc = 0.0;
  for (const Atom& a : enumerate_atoms(model)) {
    const double x = static_cast<double>(a.s);
    acc += a.p0 * std::abs(f({&x, 1}, a.y));
  }
  return acc;
}

// Exact phi(x, y) = P_{Z' ~ P1}(score(x,y) < score(Z')) + half ties.
inline double enumerate_phi(const DiscreteGenerativeModel& model, const ScoreFn& score,
                            double x, int y) {
  double acc = 0.0;
  const double s = score({&x, 1}, y);
  for (const Atom& b : enumerate_atoms(model)) {
    const double xb = static_cast<double>(b.s);
    const double sb = score({&xb, 1}, b.y);
    if (s < sb) acc += b.p1;
    else if (s == sb) acc += 0.5 * b.p1;
  }
  return acc;
}

inline double enumerate_psi(const DiscreteGenerativeModel& model, const ScoreFn& score,
                            double x, int y) {
  double acc = 0.0;
  const double s = score({&x, 1}, y);
  for (const Atom& a : enumerate_atoms(model)) {
    const double xa = static_cast<double>(a.s);
    const double sa = score({&xa, 1}, a.y);
    if (sa < s) acc += a.p0;
    else if (sa == s) acc += 0.5 * a.p0;
  }
  return acc;
}

// Tie-aware projections of the lexicographic rank (score, uniform): exactly
// the conditional expectation of the tie-broken indicator given the point
// and its stored uniform.
inline double enumerate_phi_lex(const DiscreteGenerativeModel& model,
                                const ScoreFn& score, double x, int y, double u) {
  double acc = 0.0;
  const double s = score({&x, 1}, y);
  for (const Atom& b : enumerate_atoms(model)) {
    const double xb = static_cast<double>(b.s);
    const double sb = score({&xb, 1}, b.y);
    if (s < sb) acc += b.p1;
    else if (s == sb) acc += b.p1 * (1.0 - u);  // P(u < U')
  }
  return acc;
}

inline double enumerate_psi_lex(const DiscreteGenerativeModel& model,
                                const ScoreFn& score, double x, int y, double u) {
  double acc = 0.0;
  const double s = score({&x, 1}, y);
  for (const Atom& a : enumerate_atoms(model)) {
    const double xa = static_cast<double>(a.s);
    const double sa = score({&xa, 1}, a.y);
    if (sa < s) acc += a.p0;
    else if (sa == s) acc += a.p0 * u;  // P(U < u)
  }
  return acc;
}

// Exact Var(phi(X,Y) + psi(X,Y')) over the coupled triplet for a fixed score.
inline double enumerate_variance_split(const DiscreteGenerativeModel& model,
                                       const ScoreFn& score) {
  double mean = 0.0, second = 0.0;
  for (int s = 0; s < model.support_size(); ++s) {
    const double x = static_cast<double>(s);
    const SimplexVector e = model.eta({&x, 1});
    const SimplexVector h = model.eta_hat({&x, 1});
    for (int y = 0; y < model.label_count(); ++y) {
      for (int yp = 0; yp < model.label_count(); ++yp) {
        const double w = model.point_prob(s) * e[y] * h[yp];
        if (w == 0.0) continue;
        const double v =
            enumerate_phi(model, score, x, y) + enumerate_psi(model, score, x, yp);
        mean += w * v;
        second += w * v * v;
      }
    }
  }
  return second - mean * mean;
}

}  // namespace cgof::testoracle
