#ifndef NMARANK_LEAGUE_HPP_
#define NMARANK_LEAGUE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmarank/posterior.hpp"
#include "nmarank/relation.hpp"

namespace nmarank {

// Per-draw o_jk = exp(e_k - e_j) from effective values, so tied draws give
// exactly 1. Throws ConfigError for j == k or out-of-range indices.
std::vector<double> odds_ratio_samples(const PosteriorSamples& ps, int j,
                                       int k);

// Linear interpolation between order statistics at h = (n - 1) q.
double quantile_sorted(std::span<const double> sorted, double q);

struct ConditionalCI {
  int j = 0;
  int k = 0;
  Order kind = Order::Eq;  // dominant statement about (j, k)
  double point = 1.0;      // posterior mean odds ratio
  // {1} when kind == Eq, else [lo, hi].
  double lo = 1.0;
  double hi = 1.0;
  double coverage = 0.0;
  double p_eq = 0.0;
  double p_lt = 0.0;
  double p_gt = 0.0;

  bool singleton() const { return kind == Order::Eq; }
};

// Quantile levels for the dominant statement, taken over all odds-ratio
// draws:
//   Eq: {1}, coverage p_eq
//   Lt: [q((a/2) p_lt), q((1 - a/2) p_lt)]
//   Gt: [q(1 - (1 - a/2) p_gt), q(1 - (a/2) p_gt)]
// Coverage of an interval is the fraction of draws inside it.
ConditionalCI conditional_credible_interval(const PosteriorSamples& ps, int j,
                                            int k, double alpha);
// Same, with precomputed inputs.
ConditionalCI conditional_credible_interval(std::span<const double> odds,
                                            long n_eq, long n_lt, long n_gt,
                                            double alpha);

enum class Triangle { Both, Upper, Lower };

struct LeagueTable {
  std::vector<std::string> names;
  double alpha = 0.05;
  ModelKind kind = ModelKind::GaussianEffects;
  Triangle triangle = Triangle::Both;
  // cells[j][k] compares column k against row j; empty on the diagonal and
  // on the suppressed triangle.
  std::vector<std::vector<std::optional<ConditionalCI>>> cells;

  std::string cell_text(int j, int k) const;
};

// GaussianEffects cells use the plain equal-tailed interval, p_eq = 0 and
// coverage 1 - alpha.
LeagueTable league_table(const PosteriorSamples& ps, double alpha,
                         std::vector<std::string> names = {},
                         Triangle triangle = Triangle::Both);

std::string league_to_csv(const LeagueTable& t);
std::string league_to_markdown(const LeagueTable& t);

}  // namespace nmarank

#endif  // NMARANK_LEAGUE_HPP_
